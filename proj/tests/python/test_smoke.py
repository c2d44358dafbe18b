"""Smoke tests for the python bindings (run with PYTHONPATH at the build's
python_pkg directory)."""

import json
import tempfile
import os
import sys

import relcausal as rc


def expect(condition, message):
    if not condition:
        print("FAIL:", message)
        sys.exit(1)


def main():
    # graph basics
    dag = rc.Dag(
        [("S", "stimulus"), ("X1", "feature"), ("X2", "feature")],
        [("S", "X1"), ("X1", "X2")],
    )
    expect(rc.d_separated(dag, "S", "X2", ["X1"]), "chain should be blocked by X1")
    expect(not rc.d_separated(dag, "S", "X1"), "adjacent pair cannot be separated")
    expect(
        rc.parse_dag(dag.serialize()).serialize() == dag.serialize(),
        "edge-list round trip",
    )

    # enumeration
    expect(
        rc.count_dags([("A", "feature"), ("B", "feature"), ("C", "feature")]) == 25,
        "25 labeled DAGs on three nodes",
    )
    structures = rc.consistent_structures(
        [("S", "stimulus"), ("X1", "feature"), ("X2", "feature")],
        [
            ("S", "X1", [], False),
            ("S", "X2", [], True),
            ("S", "X2", ["X1"], False),
        ],
        randomized_roots=["S"],
        sufficiency=True,
    )
    expect(len(structures) == 1, "unique structure for the stimulus pattern")
    expect(
        set(map(tuple, structures[0].edges())) == {("S", "X1"), ("X2", "X1")},
        "the unique structure is S -> X1 <- X2",
    )

    # fixtures, oracles, relevance
    scm = rc.canonical_fixture("stim-collider")
    provider = rc.oracle(scm)
    expect(
        rc.encoding_relevant_set(provider, "S", ["X1", "X2"]) == ["X1"],
        "collider encoding set",
    )
    expect(
        rc.decoding_relevant_set(provider, "S", ["X1", "X2"]) == ["X1", "X2"],
        "collider decoding set",
    )

    # sampling determinism + csv round trip
    data1 = rc.sample(scm, 200, 7)
    data2 = rc.sample(scm, 200, 7)
    expect(data1.to_csv() == data2.to_csv(), "seeded sampling is byte-stable")
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "d.csv")
        data1.save_csv(path)
        back = rc.Dataset.load_csv(path)
        expect(back.to_csv() == data1.to_csv(), "csv round trip")

    # statistical CI + full analysis report
    data = rc.sample(scm, 20000, 1)
    stat, p = rc.partial_correlation(data, "S", "X2", ["X1"])
    expect(p < 0.01, "collider conditional dependence detected")
    expect(abs(stat + 0.5) < 0.1, "collider partial correlation near -1/2")

    report = json.loads(
        rc.analyze(rc.oracle(scm), "stimulus", "S", ["X1", "X2"])
    )
    expect(report["schema"] == "relcausal-report-v1", "report schema tag")
    combined = {c["feature"]: c["claim"] for c in report["claims"]["combined"]}
    expect(combined["X1"] == "genuine-effect", "X1 is a genuine effect")
    expect(combined["X2"] == "not-effect", "X2 is not an effect")
    expect(report["structures"]["count"] == 1, "unique consistent structure")

    # rfe on sampled data
    relevant = rc.rfe_decoding_set(data, "S")
    expect(relevant == ["X1", "X2"], "rfe recovers the collider decoding set")

    # error surface
    try:
        rc.canonical_fixture("bogus")
        expect(False, "unknown fixture must raise")
    except ValueError:
        pass

    print("python smoke tests passed")


if __name__ == "__main__":
    main()
