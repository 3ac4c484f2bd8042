"""Regenerate the JSON fixtures shipped in src/lefkit/fixtures.

    python3 scripts/build_fixtures.py [outdir]

tests/test_fixtures.py checks that the shipped files match this output.
"""

import sys
from pathlib import Path

from lefkit import models, serialize as ser
from lefkit.graded import GradedMap
from lefkit.lefschetz import LefschetzModule
from lefkit.splitting import ExactSequence


def ext_sequence(Lw=1):
    """0 -> U -> V -> W -> 0 with U of center 1/2, W a line of center 0."""
    U = LefschetzModule.from_blocks({0: 1, 1: 1}, {0: [[1]]}, 1)
    V = LefschetzModule.from_blocks({0: 2, 1: 1}, {0: [[1, Lw]]}, 1)
    W = LefschetzModule.from_blocks({0: 1}, {}, 0)
    eps = GradedMap(U.space, V.space, 0, {0: [[1], [0]], 1: [[1]]})
    eta = GradedMap(V.space, W.space, 0, {0: [[0, 1]]})
    return ExactSequence(U, V, W, eps, eta)


def lambda_sequence():
    """V = <v0, v1> with L v0 = v1, U = <v1> in degree 1, W = V0."""
    U = LefschetzModule.from_blocks({1: 1}, {}, 2)
    V = LefschetzModule.from_blocks({0: 1, 1: 1}, {0: [[1]]}, 1)
    W = LefschetzModule.from_blocks({0: 1}, {}, 0)
    eps = GradedMap(U.space, V.space, 0, {1: [[1]]})
    eta = GradedMap(V.space, W.space, 0, {0: [[1]]})
    return ExactSequence(U, V, W, eps, eta)


# perturbations of the toy splitting; each must break both block-form checks
PERTURBATIONS = {
    "adv_alpha0.json": {"map": "alpha0", "degree": 1, "delta": [["0"], ["1"], ["0"]]},
    "adv_alpha1.json": {"map": "alpha1", "degree": 1, "delta": [["0"], ["1"], ["0"]]},
    "adv_alpha2.json": {"map": "alpha2", "degree": 1, "delta": [["0"], ["0"], ["1"]]},
}


def documents():
    docs = {"empty.json": ser.empty_doc()}
    M, P = models.projective_space_module(2)
    docs["p2.json"] = ser.lefschetz_doc(M, P)
    docs["ext.json"] = ser.exact_sequence_to_json(ext_sequence())
    docs["lambda.json"] = ser.exact_sequence_to_json(lambda_sequence())
    for name, g in (("cyc2.json", models.cyc2_graph()), ("chain3.json", models.chain3_graph())):
        _, m = models.reduction_graph_model(g)
        docs[name] = ser.local_model_to_json(m, models.graph_cycles(g))
    toy = models.arithmetic_surface_toy(2, 6, [[-1]])
    docs["toy.json"] = ser.arakelov_to_json(toy, models.toy_cycles(toy))
    toy_filtered = ser.filtered_to_json(toy.filtered, toy.pair, toy.eps_op)
    docs["toy_filtered.json"] = toy_filtered
    for name, pert in PERTURBATIONS.items():
        docs[name] = dict(toy_filtered, perturb=pert)
    inst = models.random_filtered_instance(1)
    docs["random1.json"] = ser.filtered_to_json(inst.filtered, inst.pairing, inst.eps)
    docs["bgs_two_points.json"] = ser.strata_to_json(models.two_curve_strata(2))
    docs["bgs_one_point.json"] = ser.strata_to_json(models.two_curve_strata(1))
    return docs


def main(argv):
    out = Path(argv[1]) if len(argv) > 1 else Path(__file__).resolve().parents[1] / "src/lefkit/fixtures"
    out.mkdir(parents=True, exist_ok=True)
    for name, doc in sorted(documents().items()):
        (out / name).write_text(ser.dumps(doc), encoding="utf-8")
        print(name)


if __name__ == "__main__":
    main(sys.argv)
