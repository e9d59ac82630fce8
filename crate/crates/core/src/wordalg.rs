//! Words in the generators p_ij of Pol(S_n⁺), linear combinations, and the
//! Hopf *-structure (coproduct, counit, antipode, adjoint).

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::ZERO_THRESHOLD;
use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};

/// A generator p_ij with 1-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub row: usize,
    pub col: usize,
}

impl Generator {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub fn is_diagonal(&self) -> bool {
        self.row == self.col
    }

    /// The relation p_ij p_kl = 0 applies: shared row or shared column, different letter.
    pub fn annihilates(&self, next: &Generator) -> bool {
        self != next && (self.row == next.row || self.col == next.col)
    }

    pub fn transpose(&self) -> Self {
        Self { row: self.col, col: self.row }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.row == 0 || self.col == 0 || self.row > n || self.col > n {
            return Err(Error::IndexOutOfRange { row: self.row, col: self.col, n });
        }
        Ok(())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p({},{})", self.row, self.col)
    }
}

/// A word in the generators; the empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    n: usize,
    letters: Vec<Generator>,
}

impl Word {
    pub fn unit(n: usize) -> Self {
        Self { n, letters: Vec::new() }
    }

    pub fn new(n: usize, letters: Vec<Generator>) -> Result<Self> {
        for g in &letters {
            g.check(n)?;
        }
        Ok(Self { n, letters })
    }

    /// From 1-based (row, col) pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&(i, j)| Generator::new(i, j)).collect())
    }

    pub fn generator(n: usize, row: usize, col: usize) -> Result<Self> {
        Self::new(n, vec![Generator::new(row, col)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.n != other.n {
            return Err(Error::MixedSize(self.n, other.n));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { n: self.n, letters })
    }

    pub fn suffix(&self, start: usize) -> Word {
        Word { n: self.n, letters: self.letters[start..].to_vec() }
    }

    pub fn prefix(&self, end: usize) -> Word {
        Word { n: self.n, letters: self.letters[..end].to_vec() }
    }

    pub fn counit(&self) -> f64 {
        if self.letters.iter().all(Generator::is_diagonal) {
            1.0
        } else {
            0.0
        }
    }

    pub fn antipode(&self) -> Word {
        Word { n: self.n, letters: self.letters.iter().rev().map(Generator::transpose).collect() }
    }

    pub fn adjoint(&self) -> Word {
        Word { n: self.n, letters: self.letters.iter().rev().copied().collect() }
    }

    /// Normal form under idempotence and the orthogonality relations;
    /// `None` when the word is zero.
    pub fn reduce(&self) -> Option<Word> {
        let mut out: Vec<Generator> = Vec::with_capacity(self.letters.len());
        for &g in &self.letters {
            match out.last() {
                Some(last) if *last == g => {}
                Some(last) if last.annihilates(&g) => return None,
                _ => out.push(g),
            }
        }
        Some(Word { n: self.n, letters: out })
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1] && !w[0].annihilates(&w[1]))
    }

    /// Parse "p(i,j) p(k,l) ..."; "" and "1" give the unit.
    pub fn parse(s: &str, n: usize) -> Result<Word> {
        let t = s.trim();
        if t.is_empty() || t == "1" {
            return Ok(Word::unit(n));
        }
        let mut letters = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix("p(")
                .ok_or_else(|| Error::Parse(format!("expected 'p(' in word '{s}'")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parenthesis in '{s}'")))?;
            let nums: Vec<&str> = body[..close].split(',').map(str::trim).collect();
            if nums.len() != 2 {
                return Err(Error::Parse(format!("generator needs two indices in '{s}'")));
            }
            let parse = |x: &str| {
                x.parse::<usize>().map_err(|_| Error::Parse(format!("bad index '{x}' in '{s}'")))
            };
            letters.push(Generator::new(parse(nums[0])?, parse(nums[1])?));
            rest = body[close + 1..].trim_start_matches(|c: char| c.is_whitespace() || c == '*');
        }
        Word::new(n, letters)
    }

    /// 1-based (row, col) pairs.
    pub fn pairs(&self) -> Vec<[usize; 2]> {
        self.letters.iter().map(|g| [g.row, g.col]).collect()
    }

    /// Uniformly random reduced word of the given length.
    pub fn random_reduced<R: Rng + ?Sized>(n: usize, len: usize, rng: &mut R) -> Word {
        let mut letters: Vec<Generator> = Vec::with_capacity(len);
        for _ in 0..len {
            let g = match letters.last() {
                None => Generator::new(rng.random_range(1..=n), rng.random_range(1..=n)),
                Some(prev) => {
                    // uniform over letters sharing neither row nor column with prev
                    let mut row = rng.random_range(1..n);
                    if row >= prev.row {
                        row += 1;
                    }
                    let mut col = rng.random_range(1..n);
                    if col >= prev.col {
                        col += 1;
                    }
                    Generator::new(row, col)
                }
            };
            letters.push(g);
        }
        Word { n, letters }
    }

    /// Uniformly random word of the given length with no reduction applied.
    pub fn random_raw<R: Rng + ?Sized>(n: usize, len: usize, rng: &mut R) -> Word {
        let letters = (0..len)
            .map(|_| Generator::new(rng.random_range(1..=n), rng.random_range(1..=n)))
            .collect();
        Word { n, letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Number of reduced words of length `len` over n² letters.
pub fn reduced_word_count(n: usize, len: usize) -> u128 {
    if len == 0 {
        return 1;
    }
    let first = (n * n) as u128;
    let step = ((n - 1) * (n - 1)) as u128;
    (1..len).fold(first, |acc, _| acc.saturating_mul(step))
}

/// All reduced words with 1 ≤ length ≤ max_len, shortest first.
pub fn reduced_words(n: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Word::unit(n)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for row in 1..=n {
                for col in 1..=n {
                    let g = Generator::new(row, col);
                    if let Some(last) = w.letters.last() {
                        if *last == g || last.annihilates(&g) {
                            continue;
                        }
                    }
                    let mut letters = w.letters.clone();
                    letters.push(g);
                    next.push(Word { n, letters });
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A finite complex linear combination of words.
#[derive(Debug, Clone, PartialEq)]
pub struct LinComb {
    n: usize,
    terms: BTreeMap<Word, C64>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: [f64; 2],
    word: Vec<[usize; 2]>,
}

impl LinComb {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn scalar(n: usize, c: C64) -> Self {
        let mut x = Self::zero(n);
        x.add_term(Word::unit(n), c);
        x
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, ONE)
    }

    pub fn from_word(w: Word) -> Self {
        let n = w.n;
        let mut x = Self::zero(n);
        x.add_term(w, ONE);
        x
    }

    pub fn generator(n: usize, row: usize, col: usize) -> Result<Self> {
        Ok(Self::from_word(Word::generator(n, row, col)?))
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, C64)>>(n: usize, terms: I) -> Result<Self> {
        let mut x = Self::zero(n);
        for (w, c) in terms {
            if w.n != n {
                return Err(Error::MixedSize(n, w.n));
            }
            x.add_term(w, c);
        }
        Ok(x)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> C64 {
        self.terms.get(w).copied().unwrap_or(ZERO)
    }

    fn add_term(&mut self, w: Word, c: C64) {
        let entry = self.terms.entry(w.clone()).or_insert(ZERO);
        *entry += c;
        if entry.norm() < ZERO_THRESHOLD {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &LinComb) -> Result<LinComb> {
        if self.n != other.n {
            return Err(Error::MixedSize(self.n, other.n));
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LinComb) -> Result<LinComb> {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, s: C64) -> LinComb {
        let mut out = LinComb::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    /// Product by concatenation of words; no relations applied.
    pub fn mul(&self, other: &LinComb) -> Result<LinComb> {
        if self.n != other.n {
            return Err(Error::MixedSize(self.n, other.n));
        }
        let mut out = LinComb::zero(self.n);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v)?, a * b);
            }
        }
        Ok(out)
    }

    pub fn reduce(&self) -> LinComb {
        let mut out = LinComb::zero(self.n);
        for (w, c) in &self.terms {
            if let Some(r) = w.reduce() {
                out.add_term(r, *c);
            }
        }
        out
    }

    pub fn counit(&self) -> C64 {
        self.terms.iter().map(|(w, c)| c * w.counit()).sum()
    }

    pub fn antipode(&self) -> LinComb {
        let mut out = LinComb::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(w.antipode(), *c);
        }
        out
    }

    pub fn adjoint(&self) -> LinComb {
        let mut out = LinComb::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(w.adjoint(), c.conj());
        }
        out
    }

    /// Linear extension of a word functional.
    pub fn evaluate<F: FnMut(&Word) -> C64>(&self, mut f: F) -> C64 {
        self.terms.iter().map(|(w, c)| c * f(w)).sum()
    }

    /// Subtract the counit multiple of the unit, landing in ker ε.
    pub fn centered(&self) -> LinComb {
        let e = self.counit();
        let mut out = self.clone();
        out.add_term(Word::unit(self.n), -e);
        out
    }

    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(w, c)| TermJson { coeff: [c.re, c.im], word: w.pairs() })
            .collect();
        serde_json::to_value(terms).expect("plain data serializes")
    }

    pub fn from_json(value: &serde_json::Value, n: usize) -> Result<LinComb> {
        let terms: Vec<TermJson> = serde_json::from_value(value.clone())?;
        let mut out = LinComb::zero(n);
        for t in terms {
            let pairs: Vec<(usize, usize)> = t.word.iter().map(|p| (p[0], p[1])).collect();
            out.add_term(Word::from_pairs(n, &pairs)?, C64::new(t.coeff[0], t.coeff[1]));
        }
        Ok(out)
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(w, c)| format!("({}{:+}i)·{}", c.re, c.im, w)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Every instance of the defining relations for size n, unreduced.
pub fn defining_relations(n: usize) -> Vec<LinComb> {
    let g = |i, j| Word::generator(n, i, j).expect("indices in range");
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let p = g(i, j);
            out.push(
                LinComb::from_word(p.concat(&p).unwrap()).sub(&LinComb::from_word(p.clone())).unwrap(),
            );
            for k in 1..=n {
                if k != j {
                    out.push(LinComb::from_word(g(i, j).concat(&g(i, k)).unwrap()));
                    out.push(LinComb::from_word(g(j, i).concat(&g(k, i)).unwrap()));
                }
            }
        }
        let mut row = LinComb::scalar(n, -ONE);
        let mut col = LinComb::scalar(n, -ONE);
        for j in 1..=n {
            row = row.add(&LinComb::from_word(g(i, j))).unwrap();
            col = col.add(&LinComb::from_word(g(j, i))).unwrap();
        }
        out.push(row);
        out.push(col);
    }
    out
}

fn chain_count(n: usize, legs: usize, len: usize) -> u128 {
    let exp = (legs - 1) * len;
    let mut count: u128 = 1;
    for _ in 0..exp {
        count = count.saturating_mul(n as u128);
    }
    count
}

/// Raw iterated coproduct: every chain i → k₁ → … → j per letter, unreduced.
pub struct CoproductExpand {
    word: Word,
    legs: usize,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for CoproductExpand {
    type Item = (Vec<Word>, C64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let n = self.word.n;
        let inner = self.legs - 1;
        let mut legs: Vec<Vec<Generator>> = vec![Vec::with_capacity(self.word.len()); self.legs];
        for (m, g) in self.word.letters.iter().enumerate() {
            let mut prev = g.row;
            for (l, leg) in legs.iter_mut().enumerate() {
                let next = if l < inner { self.digits[m * inner + l] + 1 } else { g.col };
                leg.push(Generator::new(prev, next));
                prev = next;
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[pos] += 1;
            if self.digits[pos] < n {
                break;
            }
            self.digits[pos] = 0;
            pos += 1;
        }
        let words = legs.into_iter().map(|letters| Word { n, letters }).collect();
        Some((words, ONE))
    }
}

/// All n^{(legs−1)·len} terms of the (legs−1)-fold iterated coproduct of `w`.
pub fn coproduct_expand(w: &Word, legs: usize, budget: u128) -> Result<CoproductExpand> {
    if legs < 2 {
        return Err(Error::Precondition("coproduct needs at least two legs".into()));
    }
    let needed = chain_count(w.n, legs, w.len());
    if needed > budget {
        return Err(Error::BudgetExceeded { budget, needed });
    }
    Ok(CoproductExpand {
        word: w.clone(),
        legs,
        digits: vec![0; (legs - 1) * w.len()],
        done: false,
    })
}

/// Iterated coproduct with every leg reduced as it is built; zero terms are
/// pruned and equal tensors merged. The budget bounds visited search nodes.
pub fn coproduct(w: &Word, legs: usize, budget: u128) -> Result<BTreeMap<Vec<Word>, C64>> {
    if legs < 2 {
        return Err(Error::Precondition("coproduct needs at least two legs".into()));
    }
    struct Search<'a> {
        word: &'a Word,
        legs: usize,
        budget: u128,
        visited: u128,
        current: Vec<Vec<Generator>>,
        out: BTreeMap<Vec<Word>, C64>,
    }
    impl Search<'_> {
        fn letter(&mut self, m: usize) -> Result<()> {
            if m == self.word.len() {
                let key = self
                    .current
                    .iter()
                    .map(|letters| Word { n: self.word.n, letters: letters.clone() })
                    .collect();
                *self.out.entry(key).or_insert(ZERO) += ONE;
                return Ok(());
            }
            let g = self.word.letters[m];
            self.chain(m, 0, g.row, g.col)
        }

        fn chain(&mut self, m: usize, leg: usize, from: usize, to: usize) -> Result<()> {
            self.visited += 1;
            if self.visited > self.budget {
                return Err(Error::BudgetExceeded { budget: self.budget, needed: self.visited });
            }
            let targets: Vec<usize> =
                if leg + 1 == self.legs { vec![to] } else { (1..=self.word.n).collect() };
            for k in targets {
                let g = Generator::new(from, k);
                let pushed = match self.current[leg].last() {
                    Some(last) if *last == g => false,
                    Some(last) if last.annihilates(&g) => continue,
                    _ => {
                        self.current[leg].push(g);
                        true
                    }
                };
                let result = if leg + 1 == self.legs { self.letter(m + 1) } else { self.chain(m, leg + 1, k, to) };
                if pushed {
                    self.current[leg].pop();
                }
                result?;
            }
            Ok(())
        }
    }
    let mut search = Search {
        word: w,
        legs,
        budget,
        visited: 0,
        current: vec![Vec::new(); legs],
        out: BTreeMap::new(),
    };
    search.letter(0)?;
    search.out.retain(|_, c| c.norm() >= ZERO_THRESHOLD);
    Ok(search.out)
}
