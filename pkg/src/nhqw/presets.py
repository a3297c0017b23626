"""Preset parameter rows of the UOB walk and the angle syntax used in configs.

Angles in presets are stored as exact rational multiples of pi.  Preset names
are fixed by this table, not derived from figure labels:

    row  label   preset   alpha0 alpha1 beta0 beta1 gamma_l gamma_r theta0 theta1
    1    ndqw5   fig5     0      0      pi/4  pi/4  pi/2    pi/2    pi/4   pi/4
    2    ndqw4   fig4     0      0      0     0     0       0       pi/4   pi/4
    3    ndqw7   fig7     0      0      0     0     0       0       0      0
    4    ndqw6   fig6     pi/2   0      0     0     0       0       0      0
    5    ndqw2   fig3     pi     pi/3   pi    pi/6  pi/2    pi/2    pi/6   pi/2
    6    ndqw1   fig8     0      pi/2   0     pi/2  0       0       0      pi/4
    7    ndqw3   fig9     pi/2   0      0     pi/2  0       pi/2    0      pi/4
    8    ndqw8   fig10    0      pi/2   0     pi/2  0       pi/6    pi/4   pi/4

Rows 1-4 take the figure number written in their label; row 8 is ``fig10``;
rows 5-7 take the remaining names fig3, fig8, fig9 in table order.  The
``ndqwK`` labels and ``rowK`` are accepted as aliases.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .walks import UobNhqwParams

F = Fraction


@dataclass(frozen=True)
class Preset:
    name: str
    row: int
    label: str
    angles: tuple  # Fractions of pi, in UobNhqwParams field order

    @property
    def params(self) -> UobNhqwParams:
        return UobNhqwParams(*(float(a) * math.pi for a in self.angles))

    def formatted(self) -> list[str]:
        return [format_pi(a) for a in self.angles]


_TABLE = [
    ("fig5", "ndqw5", (0, 0, F(1, 4), F(1, 4), F(1, 2), F(1, 2), F(1, 4), F(1, 4))),
    ("fig4", "ndqw4", (0, 0, 0, 0, 0, 0, F(1, 4), F(1, 4))),
    ("fig7", "ndqw7", (0, 0, 0, 0, 0, 0, 0, 0)),
    ("fig6", "ndqw6", (F(1, 2), 0, 0, 0, 0, 0, 0, 0)),
    ("fig3", "ndqw2", (1, F(1, 3), 1, F(1, 6), F(1, 2), F(1, 2), F(1, 6), F(1, 2))),
    ("fig8", "ndqw1", (0, F(1, 2), 0, F(1, 2), 0, 0, 0, F(1, 4))),
    ("fig9", "ndqw3", (F(1, 2), 0, 0, F(1, 2), 0, F(1, 2), 0, F(1, 4))),
    ("fig10", "ndqw8", (0, F(1, 2), 0, F(1, 2), 0, F(1, 6), F(1, 4), F(1, 4))),
]

PRESETS = {
    name: Preset(name, row, label, tuple(F(a) for a in angles))
    for row, (name, label, angles) in enumerate(_TABLE, start=1)
}
_ALIASES = {}
for _p in PRESETS.values():
    _ALIASES[_p.label] = _p.name
    _ALIASES[f"row{_p.row}"] = _p.name


def preset_names() -> list[str]:
    """Preset names ordered by figure number."""
    return sorted(PRESETS, key=lambda s: int(s[3:]))


def get_preset(name: str) -> Preset:
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    try:
        return PRESETS[key]
    except KeyError:
        raise ValidationError(
            f"unknown preset {name!r}; expected one of {', '.join(preset_names())} "
            f"(or ndqw1..ndqw8, row1..row8)"
        ) from None


def format_pi(a: Fraction) -> str:
    a = Fraction(a)
    if a == 0:
        return "0"
    sign = "-" if a < 0 else ""
    a = abs(a)
    num = "pi" if a.numerator == 1 else f"{a.numerator}*pi"
    return f"{sign}{num}" if a.denominator == 1 else f"{sign}{num}/{a.denominator}"


_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_PI_EXPR = re.compile(rf"^(?P<sign>[+-]?)(?:(?P<coef>{_NUM})\s*\*?\s*)?(?:pi|π)(?:\s*/\s*(?P<den>{_NUM}))?$")


def parse_angle(text: str) -> float:
    """Radians from ``'pi/4'``, ``'-3*pi/2'``, ``'2pi'``, ``'π'`` or a plain float."""
    s = str(text).strip().lower()
    m = _PI_EXPR.match(s)
    if m:
        value = math.pi * float(m.group("coef") or 1)
        if m.group("den"):
            den = float(m.group("den"))
            if den == 0:
                raise ValidationError(f"zero denominator in angle {text!r}")
            value /= den
        return -value if m.group("sign") == "-" else value
    try:
        value = float(s)
    except ValueError:
        raise ValidationError(f"cannot parse angle {text!r}; use e.g. pi/4, -3*pi/2 or 0.7853981") from None
    if not math.isfinite(value):
        raise ValidationError(f"angle must be finite, got {text!r}")
    return value
