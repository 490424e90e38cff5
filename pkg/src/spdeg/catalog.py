"""The classification catalog: classes, expected invariants, degeneration curves.

Twenty-five 4-dimensional symplectic Lie algebra classes (five of them
parametrized), the expected derivation dimensions for each, the full list of
explicit degeneration curves, the named rational families used by the
curvature checks, and one 6-dimensional validation law.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import linalg
from .scalars import ExpPoly, format_rational, parse_rational
from .tensor import Bracket, TwoForm, act

F = Fraction


class DomainError(ValueError):
    """A class parameter outside its printed domain."""


@dataclass(frozen=True)
class ClassId:
    """A catalog class: registry key plus optional rational parameter."""

    key: str
    param: Optional[Fraction] = None

    def __str__(self):
        spec = CLASSES[self.key]
        segs = self.key.split(":")
        if self.param is not None:
            segs.insert(1, f"{spec.param_name}={format_rational(self.param)}")
        return ":".join(segs)

    def display(self) -> str:
        spec = CLASSES[self.key]
        if self.param is None:
            return spec.display
        out = spec.display
        negated = "-" + spec.param_name
        if negated in out:
            out = out.replace(negated, format_rational(-self.param))
        return out.replace(spec.param_name, format_rational(self.param))


@dataclass
class ClassSpec:
    key: str
    mu: int                      # index in the classification tables
    display: str
    rules: Callable              # param -> structure constant dict
    derdims: Callable            # param -> (dim Der_w, dim Der)
    param_name: Optional[str] = None
    param_check: Optional[Callable] = None
    param_doc: str = ""
    samples: tuple = ()


def _c(rules):
    return lambda p: rules


def _d(dims):
    return lambda p: dims


def _half(x):
    return F(x) / 2


CLASS_DEFS = [
    ClassSpec("a4", 0, "(a4, w)", _c({}), _d((10, 16))),
    ClassSpec("rh3", 1, "(rh3, w)", _c({(1, 2): {3: F(1)}}), _d((5, 10))),
    ClassSpec("rr3_0", 2, "(rr3,0, w)", _c({(1, 3): {3: F(1)}}), _d((4, 8))),
    ClassSpec("rr3_m1", 3, "(rr3,-1, w)",
              _c({(1, 2): {2: F(-1)}, (1, 4): {4: F(1)}}), _d((2, 6))),
    ClassSpec("rr3p_0", 4, "(rr3',0, w)",
              _c({(1, 2): {4: F(1)}, (1, 4): {2: F(-1)}}), _d((2, 6))),
    ClassSpec("r2r2", 5, "(r2r2, w_lambda)",
              lambda p: {(1, 2): {3: -p}, (1, 3): {3: F(1)}, (2, 4): {4: F(1)}},
              _d((2, 4)),
              param_name="lambda", param_check=lambda p: p >= 0,
              param_doc="lambda >= 0", samples=(F(0), F(1), F(7, 3))),
    ClassSpec("r2p", 6, "(r2', w)",
              _c({(1, 3): {3: F(1)}, (1, 4): {4: F(1)},
                  (2, 3): {4: F(-1)}, (2, 4): {3: F(1)}}), _d((2, 4))),
    ClassSpec("n4", 7, "(n4, w)",
              _c({(1, 2): {4: F(1)}, (1, 4): {3: F(1)}}), _d((3, 7))),
    ClassSpec("r4_0:plus", 8, "(r4,0, w+)",
              _c({(1, 3): {3: F(1)}, (1, 4): {2: F(1)}}), _d((2, 6))),
    ClassSpec("r4_0:minus", 9, "(r4,0, w-)",
              _c({(1, 3): {3: F(1)}, (1, 4): {2: F(-1)}}), _d((2, 6))),
    ClassSpec("r4_m1", 10, "(r4,-1, w)",
              _c({(1, 2): {2: F(1)}, (1, 3): {3: F(-1)}, (1, 4): {3: F(-1), 4: F(-1)}}),
              _d((2, 6))),
    ClassSpec("r4_m1_beta", 11, "(r4,-1,beta, w)",
              lambda p: {(1, 2): {2: F(-1)}, (1, 3): {3: p}, (1, 4): {4: F(1)}},
              lambda p: (3, 8) if p == -1 else (2, 6),
              param_name="beta", param_check=lambda p: -1 <= p < 1,
              param_doc="-1 <= beta < 1", samples=(F(-1, 2), F(0), F(1, 2))),
    ClassSpec("r4_alpha", 12, "(r4,alpha,-alpha, w)",
              lambda p: {(1, 2): {2: F(-1)}, (1, 3): {3: -1 / p}, (1, 4): {4: F(1)}},
              _d((2, 6)),
              param_name="alpha", param_check=lambda p: -1 < p < 0,
              param_doc="-1 < alpha < 0", samples=(F(-1, 4), F(-1, 2), F(-3, 4))),
    ClassSpec("r4p_0:plus", 13, "(r4',0,delta, w+)",
              lambda p: {(1, 2): {4: -p}, (1, 3): {3: F(1)}, (1, 4): {2: p}},
              _d((2, 6)),
              param_name="delta", param_check=lambda p: p > 0,
              param_doc="delta > 0", samples=(F(1), F(2), F(5, 2))),
    ClassSpec("r4p_0:minus", 14, "(r4',0,delta, w-)",
              lambda p: {(1, 2): {4: p}, (1, 3): {3: F(1)}, (1, 4): {2: -p}},
              _d((2, 6)),
              param_name="delta", param_check=lambda p: p > 0,
              param_doc="delta > 0", samples=(F(1), F(2), F(5, 2))),
    ClassSpec("d4_1:w1", 15, "(d4,1, w1)",
              _c({(1, 2): {2: F(1)}, (1, 3): {3: F(1)}, (2, 4): {3: F(1)}}), _d((3, 5))),
    ClassSpec("d4_1:w2", 16, "(d4,1, w2)",
              _c({(1, 2): {2: F(1)}, (1, 3): {3: F(1)}, (1, 4): {3: F(1)},
                  (2, 4): {3: F(1)}}), _d((2, 5))),
    ClassSpec("d4_2:w1", 17, "(d4,2, w1)",
              _c({(1, 2): {2: F(2)}, (1, 3): {3: F(1)}, (1, 4): {4: F(-1)},
                  (2, 4): {3: F(1)}}), _d((2, 5))),
    ClassSpec("d4_2:w2", 18, "(d4,2, w2)",
              _c({(1, 2): {2: F(-1)}, (1, 3): {3: F(2)}, (1, 4): {4: F(1)},
                  (2, 3): {4: F(1)}}), _d((1, 5))),
    ClassSpec("d4_2:w3", 19, "(d4,2, w3)",
              _c({(1, 2): {2: F(-1)}, (1, 3): {3: F(2)}, (1, 4): {4: F(1)},
                  (2, 3): {4: F(-1)}}), _d((1, 5))),
    ClassSpec("d4_lambda", 20, "(d4,lambda, w)",
              lambda p: {(1, 2): {2: p}, (1, 3): {3: F(1)}, (1, 4): {4: 1 - p},
                         (2, 4): {3: F(1)}},
              lambda p: (4, 7) if p == F(1, 2) else (2, 5),
              param_name="lambda",
              param_check=lambda p: p >= F(1, 2) and p != 1 and p != 2,
              param_doc="lambda >= 1/2, lambda not in {1, 2}",
              samples=(F(5, 2), F(7, 3), F(3))),
    ClassSpec("d4p:plus", 21, "(d4',delta, w+)",
              lambda p: {(1, 2): {2: _half(p), 4: F(-1)}, (1, 3): {3: p},
                         (1, 4): {2: F(1), 4: _half(p)}, (2, 4): {3: p}},
              _d((2, 5)),
              param_name="delta", param_check=lambda p: p > 0,
              param_doc="delta > 0", samples=(F(1), F(2), F(5, 2))),
    ClassSpec("d4p:minus", 22, "(d4',delta, w-)",
              lambda p: {(1, 2): {2: -_half(p), 4: F(-1)}, (1, 3): {3: -p},
                         (1, 4): {2: F(1), 4: -_half(p)}, (2, 4): {3: -p}},
              _d((2, 5)),
              param_name="delta", param_check=lambda p: p > 0,
              param_doc="delta > 0", samples=(F(1), F(2), F(5, 2))),
    ClassSpec("h4:plus", 23, "(h4, w+)",
              _c({(1, 2): {2: F(1, 2)}, (1, 3): {3: F(1)},
                  (1, 4): {2: F(1), 4: F(1, 2)}, (2, 4): {3: F(1)}}), _d((2, 5))),
    ClassSpec("h4:minus", 24, "(h4, w-)",
              _c({(1, 2): {2: F(1, 2)}, (1, 3): {3: F(1)},
                  (1, 4): {2: F(-1), 4: F(1, 2)}, (2, 4): {3: F(1)}}), _d((2, 5))),
]

CLASSES = {spec.key: spec for spec in CLASS_DEFS}
MU_INDEX = {spec.mu: spec.key for spec in CLASS_DEFS}


def class_keys():
    return [spec.key for spec in CLASS_DEFS]


def class_id(key: str, param=None) -> ClassId:
    """Validate (key, param) against the registry and its printed domain."""
    if key.startswith("mu") and key[2:].isdigit():
        key = MU_INDEX[int(key[2:])]
    if key not in CLASSES:
        raise KeyError(f"unknown class key: {key!r}")
    spec = CLASSES[key]
    if spec.param_name is None:
        if param is not None:
            raise DomainError(f"class {key} takes no parameter")
        return ClassId(key)
    if param is None:
        raise DomainError(f"class {key} needs parameter {spec.param_name} ({spec.param_doc})")
    param = Fraction(param)
    if not spec.param_check(param):
        raise DomainError(
            f"class {key}: {spec.param_name}={format_rational(param)} violates {spec.param_doc}")
    return ClassId(key, param)


def parse_class(text: str) -> ClassId:
    """Parse the CLI grammar, e.g. 'd4_2:w2', 'r2r2:lambda=7/3', 'd4p:delta=2:plus'."""
    segs = text.strip().split(":")
    param = None
    rest = []
    for seg in segs:
        if "=" in seg:
            if param is not None:
                raise ValueError(f"multiple parameter segments in {text!r}")
            name, val = seg.split("=", 1)
            param = (name, parse_rational(val))
        else:
            rest.append(seg)
    key = ":".join(rest)
    if key.startswith("mu") and key[2:].isdigit():
        key = MU_INDEX.get(int(key[2:]), key)
    if key not in CLASSES:
        raise KeyError(f"unknown class key: {key!r}")
    spec = CLASSES[key]
    if param is not None and param[0] != spec.param_name:
        raise ValueError(f"class {key} takes parameter {spec.param_name}, not {param[0]}")
    return class_id(key, param[1] if param else None)


def make(cid: ClassId):
    """Structure constants and canonical two-form for a validated class id."""
    cid = class_id(cid.key, cid.param)
    spec = CLASSES[cid.key]
    return Bracket(4, spec.rules(cid.param)), TwoForm.canonical(4)


def make_key(key: str, param=None):
    return make(class_id(key, param))


def bracket_of(key: str, param=None) -> Bracket:
    return make_key(key, param)[0]


def expected_invariants(cid: ClassId):
    """(dim Der_w, dim Der) as tabulated, parameter splits included."""
    cid = class_id(cid.key, cid.param)
    return CLASSES[cid.key].derdims(cid.param)


def expected_invariants_table():
    """Every class at its sample parameters with the tabulated dimensions."""
    out = []
    for spec in CLASS_DEFS:
        if spec.param_name is None:
            out.append((ClassId(spec.key), spec.derdims(None)))
        else:
            for p in spec.samples:
                out.append((ClassId(spec.key, p), spec.derdims(p)))
    # parameter values that land on their own tabulated rows
    out.append((ClassId("r4_m1_beta", F(-1)), (3, 8)))
    out.append((ClassId("d4_lambda", F(1, 2)), (4, 7)))
    return out


def tau6():
    """The 6-dimensional validation law with the canonical two-form on R^6."""
    rules = {(1, 3): {3: F(1)}, (1, 6): {6: F(-1)},
             (2, 4): {5: F(1)}, (4, 5): {2: F(1)}}
    return Bracket(6, rules), TwoForm.canonical(6)


# -- degeneration curves -------------------------------------------------------


def _e(r, c=1):
    return ExpPoly.exp(F(r), F(c))


def _diag(*entries):
    out = [[ExpPoly.const(0) for _ in range(4)] for _ in range(4)]
    for i, x in enumerate(entries):
        out[i][i] = ExpPoly.coerce(x)
    return out


def _m(rows):
    return [[ExpPoly.coerce(x) for x in row] for row in rows]


@dataclass
class CurveSpec:
    """One explicit degeneration curve g_t from the curve list.

    ``matrix(param)`` yields the 4x4 matrix as printed; ``orientation``
    records how the engine reads it.  A few items only reach their stated
    target after transposing or inverting the printed matrix (verified by the
    exact limit check, which doubles as the transcription-typo detector);
    those carry orientation 'transposed' or 'inverse' here rather than being
    silently rewritten.
    """

    id: str
    source_key: str
    target_key: str
    matrix: Callable
    target_param: Optional[Fraction] = None
    param_name: Optional[str] = None
    samples: tuple = ()
    orientation: str = "printed"
    time_scale: int = 1
    notes: tuple = ()

    def oriented_matrix(self, param=None):
        g = self.matrix(param)
        if self.time_scale != 1:
            g = [[ExpPoly({r * self.time_scale: c for r, c in x.terms.items()})
                  for x in row] for row in g]
        if self.orientation == "printed":
            return g
        if self.orientation == "transposed":
            return linalg.transpose(g)
        if self.orientation == "inverse":
            j = TwoForm.canonical(4).m
            return linalg.mat_scale(Fraction(-1),
                                    linalg.mat_mul(j, linalg.mat_mul(linalg.transpose(g), j)))
        raise ValueError(f"unknown orientation {self.orientation!r}")

    def instantiate(self, param=None):
        if self.param_name is not None and param is None:
            raise ValueError(f"curve {self.id} needs parameter {self.param_name}")
        src = class_id(self.source_key, param if CLASSES[self.source_key].param_name else None)
        tgt = class_id(self.target_key, self.target_param)
        g = self.oriented_matrix(param)
        label = self.id if param is None else f"{self.id}:{self.param_name}={format_rational(param)}"
        return CurveInstance(label, self, src, tgt, g,
                             make(src)[0], make(tgt)[0])

    def instances(self):
        if self.param_name is None:
            return [self.instantiate()]
        return [self.instantiate(p) for p in self.samples]


@dataclass
class CurveInstance:
    label: str
    spec: CurveSpec
    source: ClassId
    target: ClassId
    g: list
    source_bracket: Bracket
    target_bracket: Bracket


def _r2r2_to_d411(_):
    return _m([[0, 1, 0, 0],
               [0, 0, _e(-1), 0],
               [0, 0, 1, 1],
               [_e(1, -1), _e(1), 0, 0]])


def _d4lambda_to_n4(p):
    lm1 = p - 1
    return _m([
        [0, -1, 0, 0],
        [_e(2, lm1), _e(1), 0, 0],
        [_e(4, -lm1 ** 2 / p), _e(3, lm1 ** 2 / (p * (2 * p - 1))), _e(-1, 1 / lm1), -1],
        [0, _e(2, lm1 / p), _e(-2, 1 / lm1), 0]])


def _d4p_to_n4(sign):
    def build(d):
        q = 4 + d * d
        return _m([
            [_e(F(1, 2), -q / 4), 0, 0, 0],
            [0, _e(F(-1, 4)), 0, 0],
            [0, _e(F(3, 4), -q / 4), _e(F(-1, 2), F(-4) / q), 0],
            [_e(F(3, 2), q * q / 16), _e(F(1, 4), sign * d / 2), 0, _e(F(1, 4))]])
    return build


def _r4m1beta_to_n4(b):
    bm1, bp1 = b - 1, b + 1
    return _m([
        [0, -1, 0, 0],
        [_e(2, bm1), _e(1), 0, 0],
        [_e(4, bm1 ** 3 / (2 * bp1)), _e(3, bm1 ** 2 / (2 * bp1)), _e(-1, 1 / bm1), -1],
        [_e(3, bm1 ** 2 * (b - 3) / (2 * bp1)), _e(2, -bm1 / bp1), _e(-2, 1 / bm1), 0]])


def _r4alpha_to_n4(a):
    ap1, am1 = a + 1, a - 1
    return _m([
        [0, -1, 0, 0],
        [_e(2, -ap1 / a), _e(1), 0, 0],
        [_e(4, -ap1 ** 3 / (2 * a * a * am1)), _e(3, ap1 ** 2 / (2 * a * am1)),
         _e(-1, -a / ap1), -1],
        [_e(3, -ap1 ** 2 * (1 + 3 * a) / (2 * a * a * am1)), _e(2, ap1 / am1),
         _e(-2, -a / ap1), 0]])


def _r4p0_to_n4(sign):
    def build(d):
        q = d * d + 1
        return _m([
            [_e(F(1, 2), -sign * q / d), 0, 0, 0],
            [0, _e(F(-1, 4)), 0, 0],
            [0, _e(F(3, 4), -q / (d * d)), _e(F(-1, 2), -sign * d / q), 0],
            [_e(F(3, 2), sign * q * q / (d ** 3)), _e(F(1, 4), -sign / d), 0, _e(F(1, 4))]])
    return build


HALF = F(1, 2)

_CLOCK_NOTE = ("clock normalized: printed exponents doubled so the slowest "
               "decaying entry falls at least like e^-t on the check grid")

CURVE_DEFS = [
    CurveSpec("appendix:d422-r4a", "d4_2:w2", "r4_alpha",
              lambda _: _diag(1, _e(HALF), 1, _e(-HALF)), target_param=F(-1, 2),
              notes=("exponents e^{t/2}, e^{-t/2} normalized from the printed comma form",)),
    CurveSpec("appendix:d423-r4a", "d4_2:w3", "r4_alpha",
              lambda _: _diag(1, _e(HALF), 1, _e(-HALF)), target_param=F(-1, 2),
              notes=("exponents e^{t/2}, e^{-t/2} normalized from the printed comma form",)),
    CurveSpec("appendix:d423-d421", "d4_2:w3", "d4_2:w1",
              lambda _: _m([[0, 1, 0, 0],
                            [0, 0, _e(-1, -1), 0],
                            [0, 0, 1, 1],
                            [_e(1), _e(1, -1), 0, 0]])),
    CurveSpec("appendix:r2r2-d411", "r2r2", "d4_1:w1", _r2r2_to_d411,
              param_name="lambda", samples=(F(0), F(1), F(7, 3))),
    CurveSpec("appendix:r2r2-rr30", "r2r2", "rr3_0",
              lambda _: _diag(1, _e(1), 1, _e(-1)),
              param_name="lambda", samples=(F(0), F(1), F(7, 3))),
    CurveSpec("appendix:r2p-d411", "r2p", "d4_1:w1",
              lambda _: _m([[1, 0, 0, 0],
                            [0, 0, 0, _e(HALF)],
                            [0, 0, 1, 0],
                            [0, _e(-HALF, -1), 0, 0]]),
              orientation="transposed",
              notes=("printed matrix reaches the target only after transposition",)),
    CurveSpec("appendix:d412-d411", "d4_1:w2", "d4_1:w1",
              lambda _: _diag(1, _e(-1), 1, _e(1))),
    CurveSpec("appendix:d412-n4", "d4_1:w2", "n4",
              lambda _: _m([[_e(1), 0, 0, 0],
                            [0, _e(2), 0, 0],
                            [0, _e(4), _e(-1), 0],
                            [_e(3), _e(3), 0, _e(-2)]])),
    CurveSpec("appendix:d411-rh3", "d4_1:w1", "rh3",
              lambda _: _m([[_e(1, -1), 0, 0, 0],
                            [0, 1, 0, 0],
                            [0, _e(1, -1), _e(-1, -1), 0],
                            [_e(2), 0, 0, 1]])),
    CurveSpec("appendix:rr30-rh3", "rr3_0", "rh3",
              lambda _: _m([[_e(1), 0, 0, 0],
                            [0, 1, 0, 0],
                            [0, _e(1, -1), _e(-1), 0],
                            [_e(2, -1), 0, 0, 1]])),
    CurveSpec("appendix:h4p-d4half", "h4:plus", "d4_lambda",
              lambda _: _diag(1, _e(-HALF), 1, _e(HALF)), target_param=F(1, 2)),
    CurveSpec("appendix:h4p-n4", "h4:plus", "n4",
              lambda _: _m([[_e(2, F(-1, 4)), 0, 0, 0],
                            [0, _e(-1), 0, 0],
                            [0, _e(3, F(-1, 4)), _e(-2, -4), 0],
                            [_e(6, F(1, 16)), _e(1, HALF), 0, _e(1)]])),
    CurveSpec("appendix:h4m-d4half", "h4:minus", "d4_lambda",
              lambda _: _diag(1, _e(-HALF), 1, _e(HALF)), target_param=F(1, 2)),
    CurveSpec("appendix:h4m-n4", "h4:minus", "n4",
              lambda _: _m([[_e(2, F(1, 4)), 0, 0, 0],
                            [0, _e(-1), 0, 0],
                            [0, _e(3, F(-1, 4)), _e(-2, 4), 0],
                            [_e(6, F(-1, 16)), _e(1, -HALF), 0, _e(1)]])),
    CurveSpec("appendix:r40p-rr30", "r4_0:plus", "rr3_0",
              lambda _: _diag(1, _e(-HALF), 1, _e(HALF))),
    CurveSpec("appendix:r40p-n4", "r4_0:plus", "n4",
              lambda _: _m([[_e(2, -1), 0, 0, 0],
                            [0, _e(-1), 0, 0],
                            [0, _e(3, -1), _e(-2, -1), 0],
                            [_e(6), _e(1, -1), 0, _e(1)]])),
    CurveSpec("appendix:r40m-rr30", "r4_0:minus", "rr3_0",
              lambda _: _diag(1, _e(-HALF), 1, _e(HALF))),
    CurveSpec("appendix:r40m-n4", "r4_0:minus", "n4",
              lambda _: _m([[_e(2), 0, 0, 0],
                            [0, _e(-1), 0, 0],
                            [0, _e(3, -1), _e(-2), 0],
                            [_e(6, -1), _e(1), 0, _e(1)]])),
    CurveSpec("appendix:d421-n4", "d4_2:w1", "n4",
              lambda _: _m([[0, -1, 0, 0],
                            [_e(2), _e(1), 0, 0],
                            [0, _e(3, F(1, 6)), _e(-1), -1],
                            [_e(3, HALF), _e(2, HALF), _e(-2), 0]])),
    CurveSpec("appendix:r4m1-r4m1m1", "r4_m1", "r4_m1_beta",
              lambda _: _m([[1, 0, 0, 0],
                            [0, 0, 0, _e(1, -1)],
                            [0, 0, 1, 0],
                            [0, _e(-1), 0, 0]]), target_param=F(-1)),
    CurveSpec("appendix:r4m1-n4", "r4_m1", "n4",
              lambda _: _m([[_e(1, -2), 0, 0, 0],
                            [0, _e(2, -4), 0, 0],
                            [0, _e(4, -4), _e(-1, -HALF), 0],
                            [_e(3, -2), _e(3, 4), 0, _e(-2, F(-1, 4))]])),
    CurveSpec("appendix:d4half-rh3", "d4_lambda", "rh3",
              lambda _: _m([[_e(-1), 0, 0, 0],
                            [0, 1, 0, 0],
                            [0, _e(2, -2), _e(1), 0],
                            [_e(1, -2), 0, 0, 1]]),
              target_param=None, param_name=None, samples=(),
              orientation="inverse",
              notes=("source instantiated at lambda = 1/2",
                     "printed matrix reaches the target only after inversion",)),
    CurveSpec("appendix:r4m1m1-rh3", "r4_m1_beta", "rh3",
              lambda _: _m([[0, 1, 0, 0],
                            [_e(1, -2), 0, 0, 0],
                            [0, _e(1, -1), 0, 1],
                            [0, 0, _e(-1, -HALF), 0]]),
              notes=("source instantiated at beta = -1",)),
    CurveSpec("appendix:d4lambda-n4", "d4_lambda", "n4", _d4lambda_to_n4,
              param_name="lambda", samples=(F(5, 2), F(7, 3), F(3))),
    CurveSpec("appendix:d4pp-n4", "d4p:plus", "n4", _d4p_to_n4(F(1)),
              param_name="delta", samples=(F(1), F(2), F(5, 2)),
              time_scale=2, notes=(_CLOCK_NOTE,)),
    CurveSpec("appendix:d4pm-n4", "d4p:minus", "n4", _d4p_to_n4(F(-1)),
              param_name="delta", samples=(F(1), F(2), F(5, 2)),
              time_scale=2, notes=(_CLOCK_NOTE,)),
    CurveSpec("appendix:r4m1beta-n4", "r4_m1_beta", "n4", _r4m1beta_to_n4,
              param_name="beta", samples=(F(-1, 2), F(0), F(1, 2))),
    CurveSpec("appendix:r4alpha-n4", "r4_alpha", "n4", _r4alpha_to_n4,
              param_name="alpha", samples=(F(-1, 4), F(-1, 2), F(-3, 4))),
    CurveSpec("appendix:r4p0p-n4", "r4p_0:plus", "n4", _r4p0_to_n4(F(1)),
              param_name="delta", samples=(F(1), F(2), F(5, 2)),
              time_scale=2, notes=(_CLOCK_NOTE,)),
    CurveSpec("appendix:r4p0m-n4", "r4p_0:minus", "n4", _r4p0_to_n4(F(-1)),
              param_name="delta", samples=(F(1), F(2), F(5, 2)),
              time_scale=2, notes=(_CLOCK_NOTE,)),
    CurveSpec("appendix:rr3m1-n4", "rr3_m1", "n4",
              lambda _: _m([[0, -1, 0, 0],
                            [_e(2, -1), _e(1), 0, 0],
                            [0, _e(3, HALF), _e(-1, -1), -1],
                            [_e(3, -1), _e(2), _e(-2, -1), 0]])),
    CurveSpec("appendix:rr3p0-n4", "rr3p_0", "n4",
              lambda _: _m([[_e(HALF), 0, 0, 0],
                            [0, _e(F(-1, 4)), 0, 0],
                            [0, _e(F(3, 4), -1), _e(-HALF), 0],
                            [_e(F(3, 2), -1), 0, 0, _e(F(1, 4))]])),
    CurveSpec("appendix:n4-rh3", "n4", "rh3",
              lambda _: _m([[_e(1), 0, 0, 0],
                            [0, _e(1), 0, 0],
                            [0, 0, _e(-1), 0],
                            [0, _e(2, -1), 0, _e(-1)]]),
              notes=("printed limit label is garbled; target is rh3 per the "
                     "degeneration diagrams",)),
    CurveSpec("appendix:rh3-a4", "rh3", "a4",
              lambda _: _diag(1, _e(1), 1, _e(-1))),
    CurveSpec("ex2:xi_u", "d4_2:w2", "r4_alpha",
              lambda _: _diag(1, _e(1), 1, _e(-1)), target_param=F(-1, 2)),
]


def _fix_d4half_source():
    # the d4half-rh3 and r4m1m1-rh3 sources live at pinned parameter values
    for spec in CURVE_DEFS:
        if spec.id == "appendix:d4half-rh3":
            spec.instantiate = _pinned_instantiate(spec, F(1, 2))  # type: ignore
        if spec.id == "appendix:r4m1m1-rh3":
            spec.instantiate = _pinned_instantiate(spec, F(-1))  # type: ignore


def _pinned_instantiate(spec: CurveSpec, source_param):
    def instantiate(param=None):
        src = class_id(spec.source_key, source_param)
        tgt = class_id(spec.target_key, spec.target_param)
        g = spec.oriented_matrix(None)
        return CurveInstance(spec.id, spec, src, tgt, g, make(src)[0], make(tgt)[0])
    return instantiate


_fix_d4half_source()

CURVES = {spec.id: spec for spec in CURVE_DEFS}


def curves():
    """All curve specs: the printed list plus the worked-example curve."""
    return list(CURVE_DEFS)


def parse_curve(text: str):
    """Parse 'appendix:d4lambda-n4:lambda=7/3' into an instantiated curve."""
    segs = text.strip().split(":")
    param = None
    rest = []
    for seg in segs:
        if "=" in seg:
            name, val = seg.split("=", 1)
            param = (name, parse_rational(val))
        else:
            rest.append(seg)
    cid = ":".join(rest)
    if cid not in CURVES:
        raise KeyError(f"unknown curve id: {cid!r}")
    spec = CURVES[cid]
    if spec.param_name is None:
        if param is not None:
            raise ValueError(f"curve {cid} takes no parameter")
        return spec.instantiate()
    if param is None:
        raise ValueError(f"curve {cid} needs parameter {spec.param_name}")
    if param[0] != spec.param_name:
        raise ValueError(f"curve {cid} takes parameter {spec.param_name}, not {param[0]}")
    return spec.instantiate(param[1])


# -- named rational families ---------------------------------------------------


def scaling_transform(t: Fraction):
    """diag(1/t, 1, t, 1); symplectic for every nonzero rational t."""
    t = Fraction(t)
    if t == 0:
        raise ValueError("t must be nonzero")
    return [[F(1) / t, 0, 0, 0], [0, F(1), 0, 0], [0, 0, t, 0], [0, 0, 0, F(1)]]


def shear_transform(t: Fraction):
    """The shear e1 -> e1 - t e4, e2 -> e2 - t e3; symplectic for rational t."""
    t = Fraction(t)
    g = linalg.identity(4)
    g[3][0] = -t
    g[2][1] = -t
    return g


def xi_family(t: Fraction) -> Bracket:
    """scaling_transform(t) acting on the nilpotent class n4."""
    return act(scaling_transform(t), bracket_of("n4"))


def rho_family(t: Fraction) -> Bracket:
    """shear_transform(t) acting on d4_lambda at lambda = 1/2."""
    return act(shear_transform(t), bracket_of("d4_lambda", F(1, 2)))


def varrho_family(t: Fraction) -> Bracket:
    """shear_transform(t) acting on d4_1:w1."""
    return act(shear_transform(t), bracket_of("d4_1:w1"))


NAMED_FAMILIES = {
    "reference:xi": xi_family,
    "reference:rho": rho_family,
    "reference:varrho": varrho_family,
}
