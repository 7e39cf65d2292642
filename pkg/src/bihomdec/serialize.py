"""JSON schemas for every value that crosses the CLI boundary.

Rationals serialize as "num/den" strings, denominator omitted when 1.
Schemas:

* BinaryForm   {"d": int, "coeffs": ["num/den", ...]}
* BiForm       {"n1","n2","d1","d2","terms":[{"e1":[ints],"e2":[ints],"c":"num/den"}]}
* PointPair    {"p1": ["num/den", ...], "p2": [...]}
* Jet          {"degrees":[...], "base":[[...],...], "dir":[[...],...]}
* Witness      {"terms":[{"w":"num/den","point":PointPair}]}
* Instance     {"p":BiForm,"S":Witness,"A":Witness,
                "metadata":{"kind","base","line":{"a","b"},"E":[PointPair],
                            "b","seed","q":BinaryForm,"m1_roots","m2_roots"}}

Exponent lists are validated against the declared bidegree on load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ShapeMismatchError
from .forms import BiForm, BinaryForm, Line, PointPair, Shape
from .instances import Instance, InstanceMeta
from .linalg import format_rational, parse_rational
from .structure import WitnessDecomposition
from .tangential import JetK


def _rat_list(values):
    return [format_rational(v) for v in values]


def _parse_list(values):
    return [parse_rational(v) for v in values]


def binaryform_to_obj(q: BinaryForm):
    return {"d": q.degree, "coeffs": _rat_list(q.coeffs)}


def binaryform_from_obj(obj) -> BinaryForm:
    return BinaryForm(int(obj["d"]), _parse_list(obj["coeffs"]))


def pointpair_to_obj(pt: PointPair):
    return {"p1": _rat_list(pt.p1), "p2": _rat_list(pt.p2)}


def pointpair_from_obj(obj) -> PointPair:
    return PointPair(tuple(_parse_list(obj["p1"])), tuple(_parse_list(obj["p2"])))


def biform_to_obj(f: BiForm):
    terms = [{"e1": list(e1), "e2": list(e2), "c": format_rational(c)}
             for (e1, e2), c in sorted(f.coeffs.items())]
    return {"n1": f.shape.n1, "n2": f.shape.n2, "d1": f.shape.d1,
            "d2": f.shape.d2, "terms": terms}


def biform_from_obj(obj) -> BiForm:
    shape = Shape(int(obj["n1"]), int(obj["n2"]), int(obj["d1"]), int(obj["d2"]))
    coeffs = {}
    for term in obj["terms"]:
        e1 = tuple(int(x) for x in term["e1"])
        e2 = tuple(int(x) for x in term["e2"])
        if sum(e1) != shape.d1 or sum(e2) != shape.d2:
            raise ShapeMismatchError(
                f"exponents {term['e1']}/{term['e2']} do not sum to the bidegree")
        coeffs[(e1, e2)] = parse_rational(term["c"])
    return BiForm(shape, coeffs)


def jet_to_obj(jet: JetK):
    return {"degrees": list(jet.degrees),
            "base": [_rat_list(v) for v in jet.base],
            "dir": [_rat_list(w) for w in jet.direction]}


def jet_from_obj(obj) -> JetK:
    return JetK(tuple(int(d) for d in obj["degrees"]),
                tuple(tuple(_parse_list(v)) for v in obj["base"]),
                tuple(tuple(_parse_list(w)) for w in obj["dir"]))


def witness_to_obj(w: WitnessDecomposition):
    return {"terms": [{"w": format_rational(wt), "point": pointpair_to_obj(pt)}
                      for wt, pt in w.terms]}


def witness_from_obj(obj, shape: Shape, target: BiForm) -> WitnessDecomposition:
    terms = tuple((parse_rational(t["w"]), pointpair_from_obj(t["point"]))
                  for t in obj["terms"])
    return WitnessDecomposition(shape, terms, target)


def instance_to_obj(inst: Instance):
    meta = inst.meta
    return {
        "p": biform_to_obj(inst.p),
        "S": witness_to_obj(inst.S),
        "A": witness_to_obj(inst.A),
        "metadata": {
            "kind": meta.kind,
            "base": _rat_list(meta.base),
            "line": {"a": _rat_list(meta.line.a), "b": _rat_list(meta.line.b)},
            "E": [{"p1": _rat_list(k[0]), "p2": _rat_list(k[1])}
                  for k in sorted(meta.e_keys)],
            "b": meta.b,
            "residual_rank": meta.residual_rank,
            "seed": meta.seed,
            "q": binaryform_to_obj(meta.q_form),
            "m1_roots": _rat_list(meta.m1_roots),
            "m2_roots": _rat_list(meta.m2_roots),
        },
    }


def instance_from_obj(obj) -> Instance:
    p = biform_from_obj(obj["p"])
    shape = p.shape
    S = witness_from_obj(obj["S"], shape, p)
    A = witness_from_obj(obj["A"], shape, p)
    md = obj["metadata"]
    line = Line(tuple(_parse_list(md["line"]["a"])),
                tuple(_parse_list(md["line"]["b"])))
    e_keys = frozenset(
        (tuple(_parse_list(e["p1"])), tuple(_parse_list(e["p2"])))
        for e in md["E"])
    meta = InstanceMeta(md["kind"], tuple(_parse_list(md["base"])), line,
                        e_keys, int(md["b"]), int(md["residual_rank"]),
                        int(md["seed"]), binaryform_from_obj(md["q"]),
                        tuple(_parse_list(md["m1_roots"])),
                        tuple(_parse_list(md["m2_roots"])))
    return Instance(shape, p, S, A, meta)


@dataclass
class Report:
    """Machine-readable suite outcome; byte-stable except for the timing field."""

    suite: str
    parameters: dict
    seed: int
    trials: int
    failures: list = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_obj(self, include_timing=True):
        obj = {
            "suite": self.suite,
            "parameters": self.parameters,
            "seed": self.seed,
            "trials": self.trials,
            "failures": sorted(self.failures, key=lambda f: f.get("trial", -1)),
            "passed": self.passed,
        }
        if include_timing:
            obj["wall_time_s"] = round(self.wall_time_s, 6)
        return obj

    def to_json(self, include_timing=True) -> str:
        return json.dumps(self.to_obj(include_timing), sort_keys=True,
                          separators=(",", ":"))


def dump_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_json(path):
    with open(path) as fh:
        return json.load(fh)
