"""Wire formats: words as comma-separated generator indices, group elements
and algebra elements as JSON, distributions as CSV."""

from __future__ import annotations

import json
from fractions import Fraction

from . import hecke, weyl
from .weyl import AffineElement

__all__ = [
    "word_to_str", "parse_word", "element_to_obj", "element_from_obj",
    "element_to_json", "element_from_json", "hecke_to_obj", "hecke_from_obj",
    "hecke_to_json", "hecke_from_json", "format_float", "write_csv",
]


def word_to_str(word) -> str:
    return ",".join(str(i) for i in word)


def parse_word(s: str, alphabet=(0, 1, 2)):
    s = s.strip()
    if not s:
        return ()
    out = []
    for k, piece in enumerate(s.split(",")):
        try:
            i = int(piece)
        except ValueError:
            raise ValueError(f"word position {k}: {piece!r} is not an integer")
        if i not in alphabet:
            raise ValueError(f"word position {k}: index {i} not in {alphabet}")
        out.append(i)
    return tuple(out)


def element_to_obj(w: AffineElement) -> dict:
    return {"mu": [w.mu[0], w.mu[1]], "u": word_to_str(weyl.W0_WORDS[w.u])}


def element_from_obj(obj) -> AffineElement:
    if not isinstance(obj, dict) or "mu" not in obj or "u" not in obj:
        raise ValueError(f"element object needs 'mu' and 'u' fields, got {obj!r}")
    mu = obj["mu"]
    if not (isinstance(mu, (list, tuple)) and len(mu) == 2):
        raise ValueError(f"element field 'mu': expected [m, n], got {mu!r}")
    word = parse_word(str(obj["u"]), alphabet=(1, 2))
    return AffineElement((int(mu[0]), int(mu[1])), weyl.w0_from_word(word))


def element_to_json(w: AffineElement) -> str:
    return json.dumps(element_to_obj(w))


def element_from_json(s: str) -> AffineElement:
    return element_from_obj(json.loads(s))


def _frac_str(x: Fraction) -> str:
    return str(x)


def hecke_to_obj(h: hecke.HeckeElement) -> dict:
    terms = []
    if h.basis == "T":
        items = sorted(h.terms.items(), key=lambda kv: (weyl.length(kv[0]), kv[0].mu, kv[0].u))
        for w, c in items:
            entry = {"index": element_to_obj(w)}
            entry.update(_coeff_obj(c, h.field))
            terms.append(entry)
    else:
        items = sorted(h.terms.items(), key=lambda kv: (kv[0][0], kv[0][1]))
        for (mu, u), c in items:
            entry = {"index": element_to_obj(AffineElement(mu, u))}
            entry.update(_coeff_obj(c, h.field))
            terms.append(entry)
    return {"basis": h.basis, "q": _frac_str(h.field.q), "terms": terms}


def _coeff_obj(c, field) -> dict:
    if field.exact:
        return {"a": _frac_str(c.a), "b": _frac_str(c.b)}
    z = complex(c)
    return {"re": z.real, "im": z.imag}


def hecke_from_obj(obj, mode: str = "exact") -> hecke.HeckeElement:
    for key in ("basis", "q", "terms"):
        if key not in obj:
            raise ValueError(f"algebra element needs field {key!r}")
    basis = obj["basis"]
    if basis not in ("T", "X"):
        raise ValueError(f"field 'basis': expected 'T' or 'X', got {basis!r}")
    q = Fraction(str(obj["q"]))
    field = hecke.ScalarField(q) if mode == "exact" else hecke.ComplexField(q)
    terms = {}
    for k, entry in enumerate(obj["terms"]):
        try:
            el = element_from_obj(entry["index"])
            if "a" in entry or "b" in entry:
                c = field.make(Fraction(str(entry.get("a", 0))),
                               Fraction(str(entry.get("b", 0))))
            else:
                if mode == "exact":
                    raise ValueError("numeric re/im coefficients in exact mode")
                c = complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"terms[{k}]: {exc}") from None
        key = el if basis == "T" else (el.mu, el.u)
        hecke._acc(terms, key, c, field)
    return hecke.HeckeElement(basis, terms, field)


def hecke_to_json(h: hecke.HeckeElement) -> str:
    return json.dumps(hecke_to_obj(h))


def hecke_from_json(s: str, mode: str = "exact") -> hecke.HeckeElement:
    try:
        obj = json.loads(s)
    except json.JSONDecodeError as exc:
        raise ValueError(f"JSON parse error at position {exc.pos}: {exc.msg}")
    return hecke_from_obj(obj, mode=mode)


def format_float(x) -> str:
    return "%.17g" % float(x)


def _csv_field(v) -> str:
    if isinstance(v, float):
        return format_float(v)
    s = str(v)
    if "," in s or s == "" or '"' in s:
        return '"' + s.replace('"', '""') + '"'
    return s


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_field(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return text
