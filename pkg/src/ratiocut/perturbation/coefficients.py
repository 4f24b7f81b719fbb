"""Exact rational storage of the series coefficients of the ratio cut.

The ratio cut near the centred straight cut of the 2:1 rectangle is

    RC = P_0 + sum_a s_a P_a + sum_{a<b} s_a s_b P_ab + sum_a s_a^2 / 2 P_aa

where ``s`` are the seven domain parameters and every ``P`` is a quadratic
polynomial in ``(q - 1/2, p - 1/2, theta)``.  ``P_alpha`` is the mixed
partial derivative of RC in the parameters, so the diagonal second-order
polynomials carry the factor 1/2 above; inside each polynomial the
coefficients are ordinary Taylor coefficients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, Iterable, Tuple

import numpy as np

from ..errors import DomainError
from ..geometry import PARAM_NAMES
from . import _tables

COEFF_NAMES = ("c0", "cq", "cp", "ct", "cqq", "cqp", "cqt", "cpp", "cpt", "ctt")
# exponents of (q - 1/2, p - 1/2, theta) for each coefficient
MONOMIALS = {
    "c0": (0, 0, 0),
    "cq": (1, 0, 0),
    "cp": (0, 1, 0),
    "ct": (0, 0, 1),
    "cqq": (2, 0, 0),
    "cqp": (1, 1, 0),
    "cqt": (1, 0, 1),
    "cpp": (0, 2, 0),
    "cpt": (0, 1, 1),
    "ctt": (0, 0, 2),
}

Index = Tuple[str, ...]


@dataclass(frozen=True)
class QuadPoly:
    """Quadratic polynomial in ``u = q - 1/2``, ``w = p - 1/2``, ``t = theta``."""

    c0: Fraction = Fraction(0)
    cq: Fraction = Fraction(0)
    cp: Fraction = Fraction(0)
    ct: Fraction = Fraction(0)
    cqq: Fraction = Fraction(0)
    cqp: Fraction = Fraction(0)
    cqt: Fraction = Fraction(0)
    cpp: Fraction = Fraction(0)
    cpt: Fraction = Fraction(0)
    ctt: Fraction = Fraction(0)
    unlisted: bool = field(default=False, compare=False)

    @classmethod
    def parse(cls, text: str) -> "QuadPoly":
        parts = text.split()
        if len(parts) != 10:
            raise ValueError(f"expected 10 coefficients, got {len(parts)}: {text!r}")
        return cls(*(Fraction(p) for p in parts))

    @classmethod
    def from_sequence(cls, values: Iterable) -> "QuadPoly":
        vals = [Fraction(v) for v in values]
        if len(vals) != 10:
            raise ValueError("expected 10 coefficients")
        return cls(*vals)

    def coefficients(self) -> tuple:
        return tuple(getattr(self, n) for n in COEFF_NAMES)

    def to_strings(self) -> list:
        return [str(c) for c in self.coefficients()]

    def replace(self, **changes) -> "QuadPoly":
        vals = {n: getattr(self, n) for n in COEFF_NAMES}
        vals.update({k: Fraction(v) for k, v in changes.items()})
        return QuadPoly(**vals)

    def __call__(self, q, p, theta):
        u = np.asarray(q, dtype=float) - 0.5
        w = np.asarray(p, dtype=float) - 0.5
        t = np.asarray(theta, dtype=float)
        c = [float(x) for x in self.coefficients()]
        return (
            c[0] + c[1] * u + c[2] * w + c[3] * t
            + c[4] * u * u + c[5] * u * w + c[6] * u * t
            + c[7] * w * w + c[8] * w * t + c[9] * t * t
        )

    def gradient(self) -> tuple:
        """Gradient at the base point ``(1/2, 1/2, 0)``."""
        return (self.cq, self.cp, self.ct)

    def hessian(self) -> list:
        """Constant Hessian as a 3x3 nested list of fractions."""
        return [
            [2 * self.cqq, self.cqp, self.cqt],
            [self.cqp, 2 * self.cpp, self.cpt],
            [self.cqt, self.cpt, 2 * self.ctt],
        ]

    def __add__(self, other: "QuadPoly") -> "QuadPoly":
        return QuadPoly(*(a + b for a, b in zip(self.coefficients(), other.coefficients())))

    def scaled(self, factor) -> "QuadPoly":
        f = Fraction(factor)
        return QuadPoly(*(f * a for a in self.coefficients()))


ZERO = QuadPoly()


def normalize_index(alpha) -> Index:
    """Canonical multi-index: a tuple of parameter names in parameter order."""
    if isinstance(alpha, str):
        alpha = tuple(a.strip() for a in alpha.split(",") if a.strip())
    alpha = tuple(alpha)
    for a in alpha:
        if a not in PARAM_NAMES:
            raise DomainError(f"unknown parameter {a!r}")
    if len(alpha) > 2:
        raise DomainError("the expansion is truncated at second order in the parameters")
    return tuple(sorted(alpha, key=PARAM_NAMES.index))


def all_indices() -> list:
    """Every multi-index of order 0, 1 and 2 over the seven parameters."""
    out = [()]
    out += [(a,) for a in PARAM_NAMES]
    for i, a in enumerate(PARAM_NAMES):
        for b in PARAM_NAMES[i:]:
            out.append((a, b))
    return out


@dataclass(frozen=True)
class ExpansionTable:
    base: QuadPoly
    first_order: Dict[str, QuadPoly]
    second_order: Dict[Tuple[str, str], QuadPoly]
    label: str = "table"

    def get(self, alpha) -> QuadPoly:
        alpha = normalize_index(alpha)
        if not alpha:
            return self.base
        if len(alpha) == 1:
            poly = self.first_order.get(alpha[0])
        else:
            poly = self.second_order.get(alpha)
        if poly is None:
            return QuadPoly(unlisted=True)
        return poly

    def items(self):
        for alpha in all_indices():
            yield alpha, self.get(alpha)

    def with_entry(self, alpha, coeff: str, value) -> "ExpansionTable":
        """Copy of the table with one coefficient replaced (used for fault injection)."""
        alpha = normalize_index(alpha)
        poly = self.get(alpha).replace(**{coeff: value})
        if not alpha:
            return ExpansionTable(poly, dict(self.first_order), dict(self.second_order), self.label)
        if len(alpha) == 1:
            fo = dict(self.first_order)
            fo[alpha[0]] = poly
            return ExpansionTable(self.base, fo, dict(self.second_order), self.label)
        so = dict(self.second_order)
        so[alpha] = poly
        return ExpansionTable(self.base, dict(self.first_order), so, self.label)

    def to_json_dict(self) -> dict:
        return {
            "coefficient_order": list(COEFF_NAMES),
            "variables": {"u": "q - 1/2", "w": "p - 1/2", "t": "theta"},
            "base": self.base.to_strings(),
            "first_order": {k: v.to_strings() for k, v in self.first_order.items()},
            "second_order": {",".join(k): v.to_strings() for k, v in self.second_order.items()},
        }

    @classmethod
    def from_json_dict(cls, data: dict, label="json") -> "ExpansionTable":
        return cls(
            QuadPoly.from_sequence(data["base"]),
            {k: QuadPoly.from_sequence(v) for k, v in data["first_order"].items()},
            {normalize_index(k): QuadPoly.from_sequence(v) for k, v in data["second_order"].items()},
            label,
        )


def _build_printed() -> ExpansionTable:
    first = {k: QuadPoly.parse(v) for k, v in _tables.FIRST_ORDER.items()}
    second = {normalize_index(k): QuadPoly.parse(v) for k, v in _tables.SECOND_ORDER.items()}
    return ExpansionTable(QuadPoly.parse(_tables.BASE), first, second, "printed")


#: Entries of the printed tables that disagree with the functional.  Each
#: corrected value was found by the finite-difference audit and confirmed by
#: exact symbolic series and by the left-right mirror and top-bottom flip
#: symmetries of the domain family.
ERRATA = {
    (("a2", "A_WR"), "cqp"): (Fraction(80, 3), Fraction(-256)),
    (("a2", "A_WR"), "cqt"): (Fraction(1), Fraction(80, 3)),
    (("A_WR", "eps_b"), "cqt"): (Fraction(-32, 3), Fraction(-32, 9)),
    (("eps_t", "eps_t"), "cpt"): (Fraction(4, 27), Fraction(-4, 27)),
    (("eps_b", "eps_b"), "cpt"): (Fraction(4, 27), Fraction(-4, 27)),
}

PRINTED = _build_printed()


def _build_corrected() -> ExpansionTable:
    table = PRINTED
    for (alpha, coeff), (printed, corrected) in ERRATA.items():
        assert table.get(alpha).coefficients()[COEFF_NAMES.index(coeff)] == printed
        table = table.with_entry(alpha, coeff, corrected)
    return ExpansionTable(table.base, table.first_order, table.second_order, "corrected")


CORRECTED = _build_corrected()


def get_table(which="corrected") -> ExpansionTable:
    if isinstance(which, ExpansionTable):
        return which
    if which == "printed":
        return PRINTED
    if which == "corrected":
        return CORRECTED
    raise ValueError(f"unknown table {which!r}")


def coefficient(alpha, table="corrected") -> QuadPoly:
    """Polynomial for the parameter multi-index ``alpha`` (order at most 2).

    Indices absent from the table come back as the zero polynomial with
    ``unlisted=True``.
    """
    return get_table(table).get(alpha)


def errata_list() -> list:
    return [
        {"index": ",".join(alpha), "coefficient": coeff, "printed": str(pr), "corrected": str(co)}
        for (alpha, coeff), (pr, co) in ERRATA.items()
    ]


def json_document() -> dict:
    doc = PRINTED.to_json_dict()
    doc["errata"] = errata_list()
    return doc


def dump_json(path) -> None:
    with open(path, "w") as fh:
        json.dump(json_document(), fh, indent=1, sort_keys=False)
        fh.write("\n")


def load_json(path=None, apply_errata=False) -> ExpansionTable:
    if path is None:
        text = resources.files(__package__).joinpath("coefficients.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    table = ExpansionTable.from_json_dict(data, "json")
    if apply_errata:
        for e in data.get("errata", []):
            table = table.with_entry(e["index"], e["coefficient"], Fraction(e["corrected"]))
    return table
