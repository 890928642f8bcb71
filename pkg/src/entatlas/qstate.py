"""4-qubit states: amplitudes, integer encoding, ground form, group actions.

A state is a tuple of 16 exact amplitudes a_{i1 i2 i3 i4} stored at index
b = i1 + 2*i2 + 4*i3 + 8*i4.  This index convention is frozen; every file
format and CLI surface documents it.  States are treated projectively by
the classifiers (global scale is ignored), so no normalization happens
anywhere.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction

from .poly import Polynomial, _W
from .scalars import GaussianRational, normalize_scalar


class StateError(Exception):
    pass


def _bits(b: int):
    return (b & 1, (b >> 1) & 1, (b >> 2) & 1, (b >> 3) & 1)


def _index(i1, i2, i3, i4) -> int:
    return i1 + 2 * i2 + 4 * i3 + 8 * i4


class State:
    """16 amplitudes of a 4-qubit state, indexed by b = i1+2*i2+4*i3+8*i4."""

    __slots__ = ("amps",)

    def __init__(self, amplitudes):
        amps = tuple(normalize_scalar(a) for a in amplitudes)
        if len(amps) != 16:
            raise StateError(f"need 16 amplitudes, got {len(amps)}")
        self.amps = amps

    def __getitem__(self, b: int):
        return self.amps[b]

    def amplitude(self, i1, i2, i3, i4):
        return self.amps[_index(i1, i2, i3, i4)]

    def __eq__(self, other):
        return isinstance(other, State) and self.amps == other.amps

    def __hash__(self):
        return hash(self.amps)

    def is_zero(self) -> bool:
        return not any(self.amps)

    def scaled(self, c) -> "State":
        return State(tuple(a * c for a in self.amps))

    def is_binary(self) -> bool:
        return all(a == 0 or a == 1 for a in self.amps)

    def __repr__(self):
        kets = []
        for b, a in enumerate(self.amps):
            if a:
                i = _bits(b)
                ket = f"|{i[0]}{i[1]}{i[2]}{i[3]}>"
                kets.append(ket if a == 1 else f"{a}*{ket}")
        return "State(" + (" + ".join(kets) or "0") + ")"

    # -- JSON format (see README for the schema) ----------------------------

    def to_json(self) -> str:
        if any(isinstance(a, GaussianRational) for a in self.amps):
            ser = []
            for a in self.amps:
                g = a if isinstance(a, GaussianRational) else GaussianRational(a)
                ser.append(
                    [
                        [g.re.numerator, g.re.denominator],
                        [g.im.numerator, g.im.denominator],
                    ]
                )
            return json.dumps({"amplitudes_c": ser})
        ser = [[Fraction(a).numerator, Fraction(a).denominator] for a in self.amps]
        return json.dumps({"amplitudes": ser})

    @classmethod
    def from_json(cls, text: str) -> "State":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise StateError(f"malformed state JSON: {e}") from e
        if not isinstance(doc, dict):
            raise StateError("state JSON must be an object")
        if "form" in doc:
            return decode_form(doc["form"])
        if "amplitudes" in doc:
            raw = doc["amplitudes"]
            if len(raw) != 16:
                raise StateError("amplitudes must list 16 entries")
            return cls(Fraction(n, d) for n, d in raw)
        if "amplitudes_c" in doc:
            raw = doc["amplitudes_c"]
            if len(raw) != 16:
                raise StateError("amplitudes_c must list 16 entries")
            return cls(
                GaussianRational(Fraction(re[0], re[1]), Fraction(im[0], im[1]))
                for re, im in raw
            )
        raise StateError('state JSON needs "form", "amplitudes" or "amplitudes_c"')


def decode_form(n: int) -> State:
    """The {0,1}-coefficient form named by n: amplitude at index b is bit b."""
    if not isinstance(n, int) or not 0 <= n <= 65535:
        raise StateError(f"form number must be in 0..65535, got {n!r}")
    return State(tuple((n >> b) & 1 for b in range(16)))


def encode_form(s: State) -> int:
    """Inverse of decode_form on {0,1} states."""
    if not s.is_binary():
        raise StateError("encode_form needs a {0,1}-amplitude state")
    return sum(1 << b for b, a in enumerate(s.amps) if a)


def to_ground_form(s: State) -> Polynomial:
    """The multilinear form A = sum a_{i1..i4} x^(1)_{i1} ... x^(4)_{i4}."""
    terms = {}
    for b, a in enumerate(s.amps):
        if a:
            i = _bits(b)
            key = 0
            for site in range(4):
                key |= 1 << (_W * (2 * site + i[site]))
            terms[key] = a
    return Polynomial(terms)


class LocalOperator:
    """One 2x2 matrix of exact scalars per site, each invertible."""

    __slots__ = ("factors",)

    def __init__(self, g1, g2, g3, g4):
        factors = []
        for k, g in enumerate((g1, g2, g3, g4), start=1):
            m = tuple(tuple(normalize_scalar(e) for e in row) for row in g)
            if len(m) != 2 or any(len(r) != 2 for r in m):
                raise StateError(f"factor {k} is not a 2x2 matrix")
            if not _det2(m):
                raise StateError(f"factor {k} is singular")
            factors.append(m)
        self.factors = tuple(factors)

    def determinants(self):
        return tuple(_det2(g) for g in self.factors)

    def is_sl(self) -> bool:
        return all(d == 1 for d in self.determinants())

    def compose(self, other: "LocalOperator") -> "LocalOperator":
        """Sitewise matrix product self . other."""
        return LocalOperator(*(
            _matmul2(a, b) for a, b in zip(self.factors, other.factors)
        ))

    @classmethod
    def identity(cls) -> "LocalOperator":
        eye = ((1, 0), (0, 1))
        return cls(eye, eye, eye, eye)


def _det2(m):
    return normalize_scalar(m[0][0] * m[1][1] - m[0][1] * m[1][0])


def _matmul2(a, b):
    return tuple(
        tuple(a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2))
        for i in range(2)
    )


def apply_local(g: LocalOperator, s: State) -> State:
    """Tensor action (g1 (x) g2 (x) g3 (x) g4)|s>."""
    out = [0] * 16
    for b, a in enumerate(s.amps):
        if not a:
            continue
        i = _bits(b)
        for jb in range(16):
            j = _bits(jb)
            c = a
            for k in range(4):
                f = g.factors[k][j[k]][i[k]]
                if not f:
                    c = 0
                    break
                c = c * f
            if c:
                out[jb] = out[jb] + c
    return State(out)


class QubitPermutation:
    """A permutation of the four tensor sites, stored as the image tuple
    (sigma(1), ..., sigma(4))."""

    __slots__ = ("images",)

    def __init__(self, images):
        img = tuple(images)
        if sorted(img) != [1, 2, 3, 4]:
            raise StateError(f"not a permutation of 1..4: {img}")
        self.images = img

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def inverse(self) -> "QubitPermutation":
        inv = [0] * 4
        for k, v in enumerate(self.images, start=1):
            inv[v - 1] = k
        return QubitPermutation(inv)

    def compose(self, other: "QubitPermutation") -> "QubitPermutation":
        """self after other."""
        return QubitPermutation(tuple(self.images[other.images[k] - 1] for k in range(4)))

    @classmethod
    def identity(cls):
        return cls((1, 2, 3, 4))

    @classmethod
    def all(cls):
        import itertools

        return [cls(p) for p in itertools.permutations((1, 2, 3, 4))]

    def __eq__(self, other):
        return isinstance(other, QubitPermutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"QubitPermutation{self.images}"


def permute_qubits(sigma: QubitPermutation, s: State) -> State:
    """Move amplitude a_{i1 i2 i3 i4} to index (i_{sigma^-1(1)}, ...)."""
    out = [0] * 16
    for jb in range(16):
        j = _bits(jb)
        src = _index(j[sigma(1) - 1], j[sigma(2) - 1], j[sigma(3) - 1], j[sigma(4) - 1])
        out[jb] = s.amps[src]
    return State(out)


def permute_form(sigma: QubitPermutation, n: int) -> int:
    """The induced action on {0,1}-form numbers."""
    return encode_form(permute_qubits(sigma, decode_form(n)))


def random_state(seed, mode: str = "exact") -> State:
    """Reproducible pseudo-random state with small integer amplitudes."""
    rng = random.Random(seed)
    if mode == "binary":
        return decode_form(rng.randrange(1, 65536))
    if mode != "exact":
        raise StateError(f"unknown random_state mode {mode!r}")
    while True:
        amps = tuple(rng.randint(-4, 4) for _ in range(16))
        if any(amps):
            return State(amps)


def random_sl2_tuple(seed) -> LocalOperator:
    """Random SL2^4 element built from unit-triangular factors, det = 1."""
    rng = random.Random(seed)
    mats = []
    for _ in range(4):
        m = ((1, 0), (0, 1))
        for _ in range(3):
            b = rng.randint(-3, 3)
            upper = ((1, b), (0, 1)) if rng.random() < 0.5 else ((1, 0), (b, 1))
            m = _matmul2(m, upper)
        mats.append(m)
    return LocalOperator(*mats)
