//! Permutations of {1, …, n} stored 0-based.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// Build from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// Build from 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation("images are 1-based".into()));
        }
        Self::from_images(images.iter().map(|&i| i - 1).collect())
    }

    /// Parse cycle notation such as "(1 2)(3 4 5)"; omitted points are fixed.
    /// Commas are accepted as separators. "()" or "" is the identity.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in cycle notation: {s}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parenthesis: {s}")))?;
            let body = &open[..close];
            let points: Vec<usize> = body
                .split(|ch: char| ch.is_whitespace() || ch == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad point '{t}' in {s}")))
                })
                .collect::<Result<_>>()?;
            for &p in &points {
                if p == 0 || p > n {
                    return Err(Error::InvalidPermutation(format!("point {p} outside 1..={n}")));
                }
                if touched[p - 1] {
                    return Err(Error::InvalidPermutation(format!("point {p} repeated in {s}")));
                }
                touched[p - 1] = true;
            }
            for k in 0..points.len() {
                let from = points[k] - 1;
                let to = points[(k + 1) % points.len()] - 1;
                images[from] = to;
            }
            rest = open[close + 1..].trim_start();
        }
        Self::from_images(images)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// 0-based image of a 0-based point.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Disjoint cycles including fixed points, each starting at its smallest
    /// element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                cyc.push(j);
                j = self.images[j];
            }
            out.push(cyc);
        }
        out
    }

    /// Cycles of length at least two.
    pub fn nontrivial_cycles(&self) -> Vec<Vec<usize>> {
        self.cycles().into_iter().filter(|c| c.len() > 1).collect()
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn fixed_point_count(&self) -> usize {
        (0..self.n()).filter(|&i| self.images[i] == i).count()
    }

    pub fn is_identity(&self) -> bool {
        self.fixed_point_count() == self.n()
    }

    /// (self ∘ other)(i) = self(other(i)).
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        Self { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Self { images: inv }
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut result = Self::identity(self.n());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = base.compose(&result);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        result
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .map(|c| c.len() as u64)
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Self { images }
    }

    /// All n! permutations in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Self { images: current.clone() });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.nontrivial_cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cyc in cycles {
            let pts: Vec<String> = cyc.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let p = Permutation::parse_cycles("(1 2)(3 4 5)", 6).unwrap();
        assert_eq!(p.apply(0), 1);
        assert_eq!(p.apply(4), 2);
        assert_eq!(p.apply(5), 5);
        assert_eq!(p.to_string(), "(1 2)(3 4 5)");
        assert_eq!(p.cycle_count(), 3);
        assert_eq!(p.fixed_point_count(), 1);
        assert_eq!(p.order(), 6);
    }

    #[test]
    fn parse_rejects_repeats_and_out_of_range() {
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 4)", 3).is_err());
        assert!(Permutation::parse_cycles("1 2", 3).is_err());
    }

    #[test]
    fn empty_and_unit_cycles_are_identity() {
        assert!(Permutation::parse_cycles("", 4).unwrap().is_identity());
        assert!(Permutation::parse_cycles("()", 4).unwrap().is_identity());
        assert!(Permutation::parse_cycles("(2)", 4).unwrap().is_identity());
    }

    #[test]
    fn all_counts_factorial() {
        assert_eq!(Permutation::all(4).len(), 24);
        assert_eq!(Permutation::all(1).len(), 1);
    }

    #[test]
    fn pow_matches_repeated_compose() {
        let p = Permutation::parse_cycles("(1 2 3 4)(5 6)", 6).unwrap();
        let mut acc = Permutation::identity(6);
        for k in 0..9 {
            assert_eq!(p.pow(k), acc);
            acc = p.compose(&acc);
        }
        assert!(p.compose(&p.inverse()).is_identity());
    }
}
