"""Published coefficient tables and congruence statements, transcribed verbatim.

Relations are stored in solved form ``target = sum poly(n) * name(n)``; a
polynomial ``(c0, c1, ...)`` means ``c0 + c1 n + ...``.
"""

from __future__ import annotations

from fractions import Fraction as Fr

from .quasimod import Congruence, LinearRelation

WEIGHT4_DYSON = (
    "N_4",
    {
        "N_2": (-1, -8),
        "M_2": (Fr(-216, 77), Fr(24, 77)),
        "M_4": (Fr(192, 77),),
        "M2_2": (Fr(260, 77), Fr(184, 77)),
        "M2_4": (Fr(-40, 11),),
    },
)

WEIGHT4_M2 = (
    "N2_4",
    {
        "N2_2": (-1, -2),
        "M_2": (Fr(-27, 77), Fr(3, 77)),
        "M_4": (Fr(24, 77),),
        "M2_2": (Fr(71, 77), Fr(-131, 77)),
        "M2_4": (Fr(-16, 11),),
    },
)

WEIGHT6_DYSON = (
    "N_6",
    {
        "N_2": (3, 20, 48),
        "M_2": (Fr(2192796, 274505), Fr(123276, 7595), Fr(-5185344, 1921535)),
        "M_4": (Fr(-445728, 54901), Fr(-5730048, 384307)),
        "M_6": (Fr(5376, 3565),),
        "M2_2": (Fr(-386988, 39215), Fr(-54556468, 1921535), Fr(-30679392, 1921535)),
        "M2_4": (Fr(96204, 7843), Fr(1412352, 54901)),
        "M2_6": (Fr(-9056, 3565),),
    },
)

WEIGHT6_M2 = (
    "N2_6",
    {
        "N2_2": (3, 5, 3),
        "M_2": (Fr(249003, 274505), Fr(36273, 83545), Fr(-162042, 1921535)),
        "M_4": (Fr(-46014, 54901), Fr(-179064, 384307)),
        "M_6": (Fr(168, 3565),),
        "M2_2": (Fr(-765123, 274505), Fr(6826601, 1921535), Fr(4805874, 1921535)),
        "M2_4": (Fr(39102, 7843), Fr(44136, 54901)),
        "M2_6": (Fr(-3848, 3565),),
    },
)

WEIGHT8_DYSON = (
    "N_8",
    {
        "N_2": (-17, -112, -224, -256),
        "aF": (Fr(15815680, 70153149),),
        "M_2": (
            Fr(-3743678558672, 83365325395),
            Fr(-141447890442736, 1750671833295),
            Fr(-135995781048448, 1750671833295),
            Fr(9269071448192, 583557277765),
        ),
        "M_4": (
            Fr(772193500416, 16673065079),
            Fr(9412063348224, 116711455553),
            Fr(9106119501824, 116711455553),
        ),
        "M_6": (Fr(-75923065344, 7578665945), Fr(-737849634816, 83365325395)),
        "M_8": (Fr(2715648, 2125853),),
        "M2_2": (
            Fr(4640559869932, 83365325395),
            Fr(260410320833296, 1750671833295),
            Fr(345677277049024, 1750671833295),
            Fr(50935374262656, 583557277765),
        ),
        "M2_4": (
            Fr(-1173668372016, 16673065079),
            Fr(-2419446071808, 16673065079),
            Fr(-2390306267136, 16673065079),
        ),
        "M2_6": (Fr(130253841984, 7578665945), Fr(1671243657216, 83365325395)),
        "M2_8": (Fr(-4858240, 2125853),),
    },
)

# (variant, k) -> (target, rhs)
RELATIONS = {
    ("dyson", 2): WEIGHT4_DYSON,
    ("m2", 2): WEIGHT4_M2,
    ("dyson", 3): WEIGHT6_DYSON,
    ("m2", 3): WEIGHT6_M2,
    ("dyson", 4): WEIGHT8_DYSON,
}

SUITE_RELATIONS = {
    "corollary1": [("dyson", 2), ("m2", 2)],
    "corollary2": [("dyson", 3), ("m2", 3)],
    "corollary3": [("dyson", 4)],
}


def published_relation(variant: str, k: int) -> LinearRelation:
    target, rhs = RELATIONS[(variant, k)]
    return LinearRelation.from_solved(target, rhs)


# substitutions used for the intermediate congruences
SUB_K3 = {"delta_q^2(M2_2)": "M_2*M_4/P"}
SUB_K4 = {"delta_q^1(M_4)": "M_2*M_4/P", "delta_q^2(M_4)": "M_2*M_6/P"}

_C = Congruence.from_sides

# Intermediate congruences as published.  Each entry records how the
# congruence is obtained from an exact relation:
#   (variant, k, substitutions, eliminate, normalize, p, multiplier)
# and which other congruences it additionally relies on.
INTERMEDIATE = {
    "crank-mod5": dict(
        statement=_C(5, {"M_2": (2, 1, 2), "M2_2": (3, 4, 1)}, {}),
        source=("dyson", 3, {}, True, True, 5, 5),
        uses=(),
    ),
    "crank-mod7": dict(
        statement=_C(7, {"M_2": (2, 6), "M_4": (6,), "M2_2": (2, 4)}, {}),
        source=("dyson", 2, {}, True, True, 7, 7),
        uses=(),
    ),
    "m2rank-mod5": dict(
        statement=_C(5, {"N2_2": (1, 0, -1)}, {"M_2": (3, 0, 2)}),
        source=("m2", 3, SUB_K3, True, True, 5, 1),
        uses=("crank-mod5",),
    ),
    "m2rank-mod3": dict(
        statement=_C(3, {"N2_2": (2, 2)}, {"M2_2": (2, 2)}),
        source=("m2", 2, {}, True, True, 3, 1),
        uses=(),
    ),
    "rank-mod3": dict(
        statement=_C(3, {"N_2": (2, 2)}, {"M2_2": (2, 2)}),
        source=("dyson", 2, {}, True, True, 3, 1),
        uses=(),
    ),
    "rank-mod5": dict(
        statement=_C(5, {"N_2": (3, 0, 2)}, {"M_2": (0, 1, 4), "M2_2": (4, 4)}),
        source=("dyson", 3, SUB_K3, True, True, 5, 1),
        uses=("crank-mod5",),
    ),
    "crank4-mod7": dict(
        statement=_C(7, {"M_2": (4, 6, 2, 3), "M_4": (6,), "M2_2": (0, 4, 5, 1)}, {}),
        source=("dyson", 4, SUB_K4, False, False, 7, 1),
        uses=(),
    ),
    "crank-mod7-combined": dict(
        statement=_C(7, {"M2_2": (3, 0, 3, 2)}, {"M_2": (3, 0, 3, 1)}),
        source=None,
        uses=("crank-mod7", "crank4-mod7"),
    ),
}

# the three intermediate displays singled out for the sweep criterion
NAMED_INTERMEDIATES = ("crank-mod5", "crank-mod7", "m2rank-mod5")

DIMENSIONS = (2, 6, 12, 21, 33, 49)
