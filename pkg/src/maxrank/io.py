"""JSON encoding of points, decompositions and reports.

Exact rationals are written as decimal strings (``"3/4"``, ``"-2"``),
floats with Python's shortest round-trip ``repr``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .variety import AmbientPoint, Decomposition, Term, VarietySpec


def encode_scalar(x):
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return float(x)


def decode_scalar(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    return float(x)


def _split(values, field: str):
    re, im = [], []
    for v in values:
        if isinstance(v, complex):
            re.append(encode_scalar(v.real))
            im.append(encode_scalar(v.imag))
        else:
            re.append(encode_scalar(v))
            im.append(encode_scalar(0.0) if not isinstance(v, (int, Fraction)) else "0")
    return re, im


def _join(re, im, field: str):
    re = [decode_scalar(v) for v in re]
    if field == "real" or im is None:
        return re
    im = [decode_scalar(v) for v in im]
    return [
        r if isinstance(r, Fraction) and i == 0 else complex(float(r), float(i))
        for r, i in zip(re, im)
    ]


def spec_to_json(spec: VarietySpec) -> dict:
    return {"family": spec.family, "params": spec.params}


def spec_from_json(obj: dict) -> VarietySpec:
    return VarietySpec.from_params(obj["family"], obj["params"])


def point_to_json(point: AmbientPoint) -> dict:
    re, im = _split(point.coeffs, point.field)
    out = {**spec_to_json(point.spec), "field": point.field, "coeffs_re": re}
    if point.field == "complex":
        out["coeffs_im"] = im
    return out


def point_from_json(obj: dict) -> AmbientPoint:
    spec = spec_from_json(obj)
    field = obj.get("field", "complex")
    return AmbientPoint(spec, tuple(_join(obj["coeffs_re"], obj.get("coeffs_im"), field)), field)


def decomposition_to_json(dec: Decomposition) -> dict:
    terms = []
    for t in dec.terms:
        (cre,), (cim,) = _split([t.coeff], dec.field)
        pre, pim = _split(t.param, dec.field)
        term = {"coeff_re": cre, "param_re": pre}
        if dec.field == "complex":
            term["coeff_im"] = cim
            term["param_im"] = pim
        terms.append(term)
    return {
        **spec_to_json(dec.spec),
        "field": dec.field,
        "terms": terms,
        "residual": dec.residual,
    }


def decomposition_from_json(obj: dict) -> Decomposition:
    spec = spec_from_json(obj)
    field = obj.get("field", "complex")
    terms = []
    for t in obj["terms"]:
        (coeff,) = _join([t["coeff_re"]], [t.get("coeff_im", 0.0)], field)
        param = _join(t["param_re"], t.get("param_im"), field)
        terms.append(Term(coeff, tuple(param)))
    res = obj.get("residual")
    return Decomposition(spec, field, tuple(terms), None if res is None else float(res))


def split_report_to_json(rep) -> dict:
    return {
        "mode": rep.mode,
        "input": point_to_json(rep.input),
        "anchor": decomposition_to_json(rep.anchor),
        "remainder": decomposition_to_json(rep.remainder),
        "combined": decomposition_to_json(rep.combined),
        "length": rep.length,
        "rank_bound": rep.rank_bound,
        "relative_residual": rep.relative_residual,
        "attempts": rep.attempts,
        "extras": {k: float(v) for k, v in rep.extras.items()},
    }


def split_report_from_json(obj: dict):
    from .decompose import SplitReport

    return SplitReport(
        input=point_from_json(obj["input"]),
        anchor=decomposition_from_json(obj["anchor"]),
        remainder=decomposition_from_json(obj["remainder"]),
        combined=decomposition_from_json(obj["combined"]),
        relative_residual=float(obj["relative_residual"]),
        attempts=int(obj["attempts"]),
        mode=obj["mode"],
        rank_bound=int(obj["rank_bound"]),
        extras=dict(obj.get("extras", {})),
    )


def certificate_to_json(cert) -> dict:
    return {
        "rank": cert.rank,
        "field": cert.field,
        "apolar_form": [encode_scalar(c) for c in cert.apolar_form.coeffs],
        "apolar_form_text": str(cert.apolar_form),
    }


def certificate_from_json(obj: dict):
    from .binary import BinaryForm, RankCertificate

    return RankCertificate(
        int(obj["rank"]),
        BinaryForm([Fraction(c) for c in obj["apolar_form"]]),
        obj["field"],
    )


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
