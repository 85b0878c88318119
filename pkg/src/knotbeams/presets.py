"""Built-in construction presets: loop tables, base polynomials, knot parameters.

Presets live in a flat key-value config text (INI sections) embedded here and
parsed at import; a user file in the same format can override or extend them.
Loop parametrizations are stored as coefficient rows over
(1, cos, sin, cos 2chi, sin 2chi) per sub-interval, one row per piece:

    lo hi  re0 re_cos re_sin re_cos2 re_sin2  im0 im_cos im_sin im_cos2 im_sin2

with lo/hi as fractions of the full parameter interval.

There is one loop table per construction and strand count.  For the
narrow-Gaussian construction the table is keyed by the strand count s of the
braid itself (base polynomial of degree s, loops gamma_1..gamma_{s-1}).  For
the polynomial-beam construction the braid is first padded with a shielding
unknot strand, so the table for s-strand braids carries a degree-(s+1) base
polynomial and loops gamma_2..gamma_s.

The knot table covers the 36 knots of at most 8 crossings (unknot included).
Parameter columns: m1/a1_inv/mu_inv drive the Gaussian construction,
m2/a2_inv the polynomial-beam one.  The parameter values are workable, not
optimal.  Two table entries deviate knowingly from their printed sources and
are marked with comments below.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

from .braid import BraidWord, component_count, parse_braid_word
from .construct import BasePolynomial, BasicLoop, LoopPiece

BUILTIN_PRESET_TEXT = """
[loops.gaussian.2]
p_roots = -1 0
gamma1 = 0 1  -0.25 0.25 0 0 0  0 0 0.25 0 0

[loops.gaussian.3]
p_roots = -1.4 0 1.4
gamma1 = 0 1  1 -1 0 0 0  0 0 -1 0 0
gamma2 = 0 1  -1 1 0 0 0  0 0 1 0 0

[loops.gaussian.4]
p_roots = -1 0 1 1.8
gamma1 = 0 1  -0.53 0.53 0 0 0  -0.15 -0.1 0.275 0.25 0
gamma2 = 0 1  0.5 -0.5 0 0 0  0 0 -0.5 0 0
gamma3 = 0 1  -0.375 0.375 0 0 0  0 0 0.375 0 0

[loops.gaussian.5]
p_roots = -2 -1 0 1 2
gamma1 = 0 1  2 -2 0 0 0  -0.3 -0.2 -0.55 0.5 0
gamma2 = 0 1  -1.5 1.5 0 0 0  0 0 1.5 0 0
gamma3 = 0 1  1.5 -1.5 0 0 0  0 0 -1.5 0 0
gamma4 = 0 1  -2 2 0 0 0  -0.3 -0.2 0.55 0.5 0

[loops.polybeam.2]
p_roots = -1 0 1
gamma2 = 0 1  -0.38 0.38 0 0 0  0 0 0.38 0 0

[loops.polybeam.3]
p_roots = -1.4 0 1.4 2.2
gamma2 = 0 1  1.5 -1.5 0 0 0  0 0 -1.5 0 0
gamma3 = 0 1  -1 1 0 0 0  0 0 1 0 0

[loops.polybeam.4]
p_roots = -2 -1 0 1 2
gamma2 = 0 1  -1.3 1.3 0 0 0  0 0 1.3 0 0
gamma3 = 0 1  1.3 -1.3 0 0 0  0 0 -1.3 0 0
gamma4 = 0 0.5  -2.2 2.2 0 0 0  0 0 0 0 -1.5
    0.5 1  -2.2 2.2 0 0 0  0 0 1.5 0 0

[loops.polybeam.5]
p_roots = -2.25 -1.5 -0.5 0 0.7 1.4
gamma2 = 0 0.5  1 -1 0 0 0  0 0 -1 0 0
    0.5 1  1 -1 0 0 0  0 0 0 0 1
gamma3 = 0 1  -0.3 0.3 0 0 0  0 0 1 0 0
gamma4 = 0 1  0.55 -0.55 0 0 0  0 0 -1 0 0
gamma5 = 0 0.5  -1.4 1.4 0 0 0  0 0 0 0 -1.4
    0.5 1  -1.4 1.4 0 0 0  0 0 1.4 0 0

# knot rows: strands, braid word, m1, a1_inv, mu_inv, m2, a2_inv, family
# 0_1 is the unknot row completing the 36-knot table; parameters follow 3_1.
[knot.0_1]
strands = 2
braid = 1
m1 = 3
a1_inv = 6
mu_inv = 8
m2 = 3
a2_inv = 4
family = torus

[knot.3_1]
strands = 2
braid = 1 1 1
m1 = 3
a1_inv = 6
mu_inv = 8
m2 = 3
a2_inv = 4
family = torus

[knot.4_1]
strands = 3
braid = 1 -2 1 -2
m1 = 12
a1_inv = 2
mu_inv = 1
m2 = 12
a2_inv = 4
family = lemniscate

[knot.5_1]
strands = 2
braid = 1 1 1 1 1
m1 = 5
a1_inv = 6
mu_inv = 8
m2 = 5
a2_inv = 4
family = torus

[knot.5_2]
strands = 3
braid = 1 1 1 2 -1 2
m1 = 12
a1_inv = 12
mu_inv = 8
m2 = 12
a2_inv = 6
family =

[knot.6_1]
strands = 4
braid = 1 1 2 -1 -3 2 -3
m1 = 20
a1_inv = 6
mu_inv = 8
m2 = 20
a2_inv = 8
family =

[knot.6_2]
strands = 3
braid = 1 1 1 -2 1 -2
m1 = 6
a1_inv = 6
mu_inv = 8
m2 = 6
a2_inv = 6
family =

# 6_3: the commonly printed 5-letter word closes to a 2-component link; the
# final generator needs exponent -2 for a knot closure.
[knot.6_3]
strands = 3
braid = 1 1 -2 1 -2 -2
m1 = 12
a1_inv = 6
mu_inv = 8
m2 = 12
a2_inv = 6
family = lemniscate

[knot.7_1]
strands = 2
braid = 1 1 1 1 1 1 1
m1 = 7
a1_inv = 6
mu_inv = 8
m2 = 7
a2_inv = 4
family = torus

[knot.7_2]
strands = 4
braid = 1 1 1 2 -1 2 3 -2 3
m1 = 20
a1_inv = 12
mu_inv = 12
m2 = 20
a2_inv = 8
family =

[knot.7_3]
strands = 3
braid = 1 1 1 1 1 2 -1 2
m1 = 12
a1_inv = 6
mu_inv = 8
m2 = 20
a2_inv = 8
family =

[knot.7_4]
strands = 4
braid = 1 1 2 -1 2 2 3 -2 3
m1 = 20
a1_inv = 8
mu_inv = 12
m2 = 20
a2_inv = 8
family =

[knot.7_5]
strands = 3
braid = 1 1 1 1 2 -1 2 2
m1 = 12
a1_inv = 6
mu_inv = 8
m2 = 12
a2_inv = 12
family =

[knot.7_6]
strands = 4
braid = 1 1 -2 1 3 -2 3
m1 = 20
a1_inv = 8
mu_inv = 12
m2 = 20
a2_inv = 12
family =

[knot.7_7]
strands = 4
braid = 1 -2 1 -2 3 -2 3
m1 = 20
a1_inv = 12
mu_inv = 8
m2 = 20
a2_inv = 12
family = lemniscate

[knot.8_1]
strands = 5
braid = 1 1 2 -1 2 3 -2 -4 3 -4
m1 = 25
a1_inv = 40
mu_inv = 16
m2 = 40
a2_inv = 8
family =

[knot.8_2]
strands = 3
braid = 1 1 1 1 1 -2 1 -2
m1 = 12
a1_inv = 6
mu_inv = 8
m2 = 12
a2_inv = 6
family =

[knot.8_3]
strands = 5
braid = 1 1 2 -1 -3 2 -3 -4 3 -4
m1 = 25
a1_inv = 40
mu_inv = 25
m2 = 40
a2_inv = 8
family =

[knot.8_4]
strands = 4
braid = 1 1 1 -2 1 -2 -3 2 -3
m1 = 20
a1_inv = 20
mu_inv = 16
m2 = 20
a2_inv = 12
family =

[knot.8_5]
strands = 3
braid = 1 1 1 -2 1 1 1 -2
m1 = 12
a1_inv = 20
mu_inv = 8
m2 = 12
a2_inv = 6
family =

[knot.8_6]
strands = 4
braid = 1 1 1 1 2 -1 -3 2 -3
m1 = 20
a1_inv = 30
mu_inv = 16
m2 = 20
a2_inv = 12
family =

[knot.8_7]
strands = 3
braid = 1 1 1 1 -2 1 -2 -2
m1 = 12
a1_inv = 20
mu_inv = 8
m2 = 12
a2_inv = 6
family =

[knot.8_8]
strands = 4
braid = 1 1 1 2 -1 -3 2 -3 -3
m1 = 20
a1_inv = 30
mu_inv = 20
m2 = 20
a2_inv = 12
family =

[knot.8_9]
strands = 3
braid = 1 1 1 -2 1 -2 -2 -2
m1 = 12
a1_inv = 20
mu_inv = 8
m2 = 12
a2_inv = 6
family = lemniscate

[knot.8_10]
strands = 3
braid = 1 1 1 -2 1 1 -2 -2
m1 = 12
a1_inv = 20
mu_inv = 8
m2 = 12
a2_inv = 6
family =

[knot.8_11]
strands = 4
braid = 1 1 2 -1 2 2 -3 2 -3
m1 = 20
a1_inv = 30
mu_inv = 40
m2 = 20
a2_inv = 12
family =

[knot.8_12]
strands = 5
braid = 1 -2 3 -4 1 -2 3 -4
m1 = 25
a1_inv = 40
mu_inv = 40
m2 = 40
a2_inv = 8
family = lemniscate

[knot.8_13]
strands = 4
braid = 1 1 -2 1 -2 -2 -3 2 -3
m1 = 20
a1_inv = 40
mu_inv = 40
m2 = 20
a2_inv = 12
family =

[knot.8_14]
strands = 4
braid = 1 1 1 2 -1 2 -3 2 -3
m1 = 20
a1_inv = 40
mu_inv = 40
m2 = 20
a2_inv = 12
family =

[knot.8_15]
strands = 4
braid = 1 1 -2 1 3 2 2 2 3
m1 = 20
a1_inv = 40
mu_inv = 40
m2 = 20
a2_inv = 12
family =

[knot.8_16]
strands = 3
braid = 1 1 -2 1 1 -2 1 -2
m1 = 12
a1_inv = 20
mu_inv = 20
m2 = 12
a2_inv = 6
family =

[knot.8_17]
strands = 3
braid = 1 1 -2 1 -2 1 -2 -2
m1 = 12
a1_inv = 20
mu_inv = 20
m2 = 12
a2_inv = 6
family =

[knot.8_18]
strands = 3
braid = 1 -2 1 -2 1 -2 1 -2
m1 = 12
a1_inv = 20
mu_inv = 20
m2 = 12
a2_inv = 6
family = lemniscate

[knot.8_19]
strands = 3
braid = 1 1 1 2 1 1 1 2
m1 = 12
a1_inv = 20
mu_inv = 20
m2 = 12
a2_inv = 6
family = torus

[knot.8_20]
strands = 3
braid = 1 1 1 -2 -1 -1 -1 -2
m1 = 12
a1_inv = 20
mu_inv = 20
m2 = 12
a2_inv = 6
family =

[knot.8_21]
strands = 3
braid = 1 1 1 2 -1 -1 2 2
m1 = 12
a1_inv = 20
mu_inv = 20
m2 = 12
a2_inv = 6
family =
"""

CONSTRUCTIONS = ("gaussian", "polybeam")


@dataclass(frozen=True)
class KnotPreset:
    """One knot-table row: input braid and the construction parameters."""

    name: str
    strands: int
    braid: str
    m1: int
    a1_inv: float
    mu_inv: float
    m2: int
    a2_inv: float
    family: str = ""

    def braid_word(self) -> BraidWord:
        return parse_braid_word(self.braid, self.strands)

    def fourier_order(self, construction: str) -> int:
        return self.m1 if construction == "gaussian" else self.m2

    def scale(self, construction: str) -> float:
        return 1.0 / (self.a1_inv if construction == "gaussian" else self.a2_inv)

    @property
    def mu(self) -> float:
        return 1.0 / self.mu_inv


@dataclass(frozen=True)
class LoopSet:
    """Base polynomial and basic loops for one construction and strand count."""

    construction: str
    strands: int
    p_roots: tuple
    loops: dict

    def base_polynomial(self) -> BasePolynomial:
        return BasePolynomial(self.p_roots)


def _parse_loop(value: str) -> BasicLoop:
    pieces = []
    for line in value.strip().splitlines():
        nums = [float(x) for x in line.split()]
        if len(nums) != 12:
            raise ValueError(f"loop piece needs 12 numbers, got {len(nums)}: {line!r}")
        pieces.append(LoopPiece(nums[0], nums[1], tuple(nums[2:7]), tuple(nums[7:12])))
    return BasicLoop(tuple(pieces))


def parse_presets(text: str) -> tuple[dict, dict]:
    """Parse preset config text into ({knot name: KnotPreset}, {(construction, s): LoopSet})."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.read_string(text)
    knots: dict[str, KnotPreset] = {}
    loop_sets: dict[tuple[str, int], LoopSet] = {}
    for section in cp.sections():
        if section.startswith("loops."):
            _, construction, s = section.split(".")
            if construction not in CONSTRUCTIONS:
                raise ValueError(f"unknown construction {construction!r} in [{section}]")
            opts = dict(cp[section])
            p_roots = tuple(float(x) for x in opts.pop("p_roots").split())
            loops = {}
            for key, value in opts.items():
                if not key.startswith("gamma"):
                    raise ValueError(f"unexpected key {key!r} in [{section}]")
                loops[int(key[len("gamma"):])] = _parse_loop(value)
            loop_sets[(construction, int(s))] = LoopSet(construction, int(s), p_roots, loops)
        elif section.startswith("knot."):
            name = section[len("knot."):]
            o = cp[section]
            preset = KnotPreset(
                name=name,
                strands=o.getint("strands"),
                braid=o.get("braid").strip(),
                m1=o.getint("m1"),
                a1_inv=o.getfloat("a1_inv"),
                mu_inv=o.getfloat("mu_inv"),
                m2=o.getint("m2"),
                a2_inv=o.getfloat("a2_inv"),
                family=o.get("family", "").strip(),
            )
            if component_count(preset.braid_word()) != 1:
                raise ValueError(f"preset {name}: braid does not close to a knot")
            knots[name] = preset
        else:
            raise ValueError(f"unknown preset section [{section}]")
    return knots, loop_sets


_KNOTS, _LOOP_SETS = parse_presets(BUILTIN_PRESET_TEXT)


def knot_preset(name: str) -> KnotPreset:
    try:
        return _KNOTS[name]
    except KeyError:
        raise KeyError(f"unknown knot preset {name!r}; available: {', '.join(sorted(_KNOTS))}") from None


def all_knot_presets() -> list[KnotPreset]:
    def key(p: KnotPreset):
        crossing, index = p.name.split("_")
        return (int(crossing), int(index))
    return sorted(_KNOTS.values(), key=key)


def loop_set(construction: str, strands: int) -> LoopSet:
    if construction not in CONSTRUCTIONS:
        raise ValueError(f"construction must be one of {CONSTRUCTIONS}, got {construction!r}")
    try:
        return _LOOP_SETS[(construction, strands)]
    except KeyError:
        raise KeyError(f"no {construction} loop preset for {strands} strands (2..5 available)") from None


def load_preset_file(path) -> tuple[dict, dict]:
    """Parse a user preset file; entries override the built-ins when merged."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_presets(fh.read())


def merged_presets(user: tuple[dict, dict] | None) -> tuple[dict, dict]:
    knots = dict(_KNOTS)
    loop_sets = dict(_LOOP_SETS)
    if user is not None:
        knots.update(user[0])
        loop_sets.update(user[1])
    return knots, loop_sets
