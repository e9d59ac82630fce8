"""Quick end-to-end check of the qperm_py extension module."""

import json
import math

import qperm_py as q


def main():
    f4 = q.fourier(4)
    assert f4.n == 4 and f4.d == 4
    assert f4.violation() < 1e-12
    assert f4.cohomology() == {"zdim": 4, "bdim": 3, "h1dim": 1}
    assert q.f4_phi(math.pi / 2).cohomology()["h1dim"] == 3

    rep = q.permutation_rep("(1 2 3)(4 5)")
    assert rep.cohomology()["h1dim"] == 1
    again = q.MagicUnitary.from_json(rep.to_json())
    assert again.cohomology() == rep.cohomology()

    xs = f4.h1_representatives()[0]
    t = q.SchurmannTriple(f4, xs)
    assert abs(t.generator("1")) == 0.0
    m = t.transition_matrix(1.0)
    assert all(abs(sum(row) - 1.0) < 1e-10 for row in m)
    assert abs(t.state(1.0, "p(1,1)") - m[0][0]) < 1e-8
    record = t.classify()
    assert record["gaussian"] is False and record["poisson"] is False

    swap = q.SchurmannTriple(q.permutation_rep("(1 2)", n=2), [[1.0], [1.0]])
    assert abs(swap.transition_matrix(1.0)[0][0] - (1 + math.exp(-2)) / 2) < 1e-12

    assert q.dims(5, 3) == [1, 4, 11, 29]
    assert q.ad_invariant_value(5, 1.0, [(1.0, 0.5)], 0) == 0.0

    exact = q.exact_marginals("(1 2 3 4)", [1.0], 0.5)
    est = q.simulate("(1 2 3 4)", [1.0], 0.5, samples=20000, seed=3)
    for i in range(4):
        for j in range(4):
            p = exact[i][j]
            se = math.sqrt(max(p * (1 - p), 1e-300) / est["samples"])
            assert abs(est["probs"][i][j] - p) <= 4 * se + 1e-12
    print(json.dumps({"h1dim F4": f4.cohomology()["h1dim"], "classify": {k: record[k] for k in ("symmetric", "tracial")}}))
    print("smoke test passed")


if __name__ == "__main__":
    main()
