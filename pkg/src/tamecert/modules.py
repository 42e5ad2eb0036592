"""Rank-2 modules over Laurent rings realising generalized Heisenberg
group actions, their finite presentation data, and the exact certificates
(relation identities, annihilators, centre acting without nilpotency).

The module for a rank-k group with invariants m_1 | ... | m_k is the free
rank-2 module over Z[x_1^{±1}, ..., x_k^{±1}]:

* x_i acts by multiplication with the variable x_i,
* z acts on the coefficient pair by the unimodular matrix [[1,1],[1,2]],
* y_j substitutes x_j -> x_j * z^{m_j} monomial-wise and then multiplies
  by (1 + x_j).

Elements are pairs (p, q) of Laurent polynomials.
"""

from itertools import product

from .laurent import LaurentPoly
from .linalg import det, identity, mat_mul

Z_MATRIX = ((1, 1), (1, 2))
Z_INVERSE = ((2, -1), (-1, 1))

CHAR_POLY = (1, -3, 1)  # t^2 - 3t + 1: trace 3, determinant 1


class CertificateError(Exception):
    """A verification found a counterexample; carries the witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# --- words -------------------------------------------------------------------

def reduce_word(word):
    out = []
    for gen, power in word:
        if power == 0:
            continue
        if out and out[-1][0] == gen:
            merged = out[-1][1] + power
            out.pop()
            if merged:
                out.append((gen, merged))
        else:
            out.append((gen, power))
    return tuple(out)


def word_inverse(word):
    return tuple((gen, -power) for gen, power in reversed(word))


def commutator_word(a, b):
    return reduce_word(word_inverse(a) + word_inverse(b) + a + b)


def format_word(word):
    if not word:
        return "1"
    parts = []
    for gen, power in word:
        parts.append(gen if power == 1 else f"{gen}^{power}")
    return " ".join(parts)


def parse_word(text):
    text = text.strip()
    if text in ("", "1"):
        return ()
    word = []
    for token in text.split():
        if "^" in token:
            gen, _, exp = token.partition("^")
            word.append((gen, int(exp)))
        else:
            word.append((token, 1))
    return reduce_word(tuple(word))


# --- the module ---------------------------------------------------------------

def _mat2_mul(a, b):
    return mat_mul(a, b)


class HeisenbergModule:
    """Concrete realisation of the module for a rank-k group."""

    def __init__(self, k, invariants):
        if len(invariants) != k:
            raise ValueError("need one invariant per index")
        if any(m <= 0 for m in invariants):
            raise ValueError("invariants must be positive")
        for a, b in zip(invariants, invariants[1:]):
            if b % a != 0:
                raise ValueError("invariants must form a divisibility chain")
        self.k = k
        self.invariants = tuple(invariants)
        self._z_powers = {0: identity(2), 1: Z_MATRIX, -1: Z_INVERSE}

    def zero(self):
        return (LaurentPoly.zero(self.k), LaurentPoly.zero(self.k))

    def generator(self, idx):
        if idx == 0:
            return (LaurentPoly.one(self.k), LaurentPoly.zero(self.k))
        if idx == 1:
            return (LaurentPoly.zero(self.k), LaurentPoly.one(self.k))
        raise ValueError("generators are a_1 and a_2")

    def element(self, p, q):
        return (p, q)

    def add(self, u, v):
        return (u[0] + v[0], u[1] + v[1])

    def sub(self, u, v):
        return (u[0] - v[0], u[1] - v[1])

    def z_power_matrix(self, n):
        if n not in self._z_powers:
            base = Z_MATRIX if n > 0 else Z_INVERSE
            power = identity(2)
            for _ in range(abs(n)):
                power = _mat2_mul(power, base)
            self._z_powers[n] = power
        return self._z_powers[n]

    def act_x(self, elem, i, power=1):
        expts = [0] * self.k
        expts[i] = power
        return (elem[0].shift(tuple(expts)), elem[1].shift(tuple(expts)))

    def act_z(self, elem, power=1):
        m = self.z_power_matrix(power)
        return (elem[0] * m[0][0] + elem[1] * m[1][0],
                elem[0] * m[0][1] + elem[1] * m[1][1])

    def _substitute(self, elem, j, sign):
        # x_j -> x_j * z^{sign * m_j}, applied monomial-wise to the pair
        mj = self.invariants[j]
        out = self.zero()
        monomials = set(elem[0].terms) | set(elem[1].terms)
        for expts in monomials:
            coeff = (elem[0].terms.get(expts, 0), elem[1].terms.get(expts, 0))
            m = self.z_power_matrix(sign * expts[j] * mj)
            new = (coeff[0] * m[0][0] + coeff[1] * m[1][0],
                   coeff[0] * m[0][1] + coeff[1] * m[1][1])
            out = self.add(out, (LaurentPoly.monomial(self.k, expts, new[0]),
                                 LaurentPoly.monomial(self.k, expts, new[1])))
        return out

    def act_y(self, elem, j, power=1):
        if power == 0:
            return elem
        step = 1 if power > 0 else -1
        for _ in range(abs(power)):
            if step == 1:
                shifted = self._substitute(elem, j, 1)
                one_plus = LaurentPoly.one(self.k) + LaurentPoly.variable(self.k, j)
                elem = (shifted[0] * one_plus, shifted[1] * one_plus)
            else:
                divided = (elem[0].divide_by_one_plus_var(j),
                           elem[1].divide_by_one_plus_var(j))
                elem = self._substitute(divided, j, -1)
        return elem

    def apply_letter(self, elem, gen, power):
        if gen == "z":
            return self.act_z(elem, power)
        kind, idx = gen[0], gen[1:]
        if kind in ("x", "y") and idx.isdigit():
            i = int(idx) - 1
            if 0 <= i < self.k:
                if kind == "x":
                    return self.act_x(elem, i, power)
                return self.act_y(elem, i, power)
        raise ValueError(f"unknown generator {gen!r}")

    def apply_word(self, elem, word):
        """Right action of a group word, letters applied left to right."""
        if isinstance(word, str):
            word = parse_word(word)
        for gen, power in word:
            elem = self.apply_letter(elem, gen, power)
        return elem

    def test_monomials(self, degree):
        """Exponent tuples of total absolute degree at most `degree`."""
        if self.k == 0:
            return [()]
        span = range(-degree, degree + 1)
        return [e for e in product(span, repeat=self.k)
                if sum(abs(c) for c in e) <= degree]

    def test_elements(self, degree):
        elems = []
        for gen_idx in range(2):
            base = self.generator(gen_idx)
            for expts in self.test_monomials(degree):
                elems.append(((gen_idx, expts),
                              (base[0].shift(expts), base[1].shift(expts))))
        return elems


def build_module(group):
    """Module carrying the action of a generalized Heisenberg group; for
    rank 0 the module is Z^2 with only the z-action."""
    return HeisenbergModule(group.k, group.invariants)


# --- relation and annihilator certificates -------------------------------------

def _relation_pairs(module):
    """Pairs of words that must act identically, one per defining relation."""
    k = module.k
    pairs = []
    for i in range(k):
        for j in range(i + 1, k):
            pairs.append((f"[x{i + 1},x{j + 1}]",
                          ((f"x{i + 1}", 1), (f"x{j + 1}", 1)),
                          ((f"x{j + 1}", 1), (f"x{i + 1}", 1))))
            pairs.append((f"[y{i + 1},y{j + 1}]",
                          ((f"y{i + 1}", 1), (f"y{j + 1}", 1)),
                          ((f"y{j + 1}", 1), (f"y{i + 1}", 1))))
    for i in range(k):
        pairs.append((f"[x{i + 1},z]",
                      ((f"x{i + 1}", 1), ("z", 1)),
                      (("z", 1), (f"x{i + 1}", 1))))
        pairs.append((f"[y{i + 1},z]",
                      ((f"y{i + 1}", 1), ("z", 1)),
                      (("z", 1), (f"y{i + 1}", 1))))
    for i in range(k):
        for j in range(k):
            if i == j:
                mi = module.invariants[i]
                pairs.append((f"[x{i + 1},y{i + 1}]=z^{mi}",
                              ((f"x{i + 1}", 1), (f"y{i + 1}", 1)),
                              ((f"y{i + 1}", 1), (f"x{i + 1}", 1), ("z", mi))))
            else:
                pairs.append((f"[x{i + 1},y{j + 1}]",
                              ((f"x{i + 1}", 1), (f"y{j + 1}", 1)),
                              ((f"y{j + 1}", 1), (f"x{i + 1}", 1))))
    for j in range(k):
        pairs.append((f"y{j + 1} y{j + 1}^-1",
                      ((f"y{j + 1}", 1), (f"y{j + 1}", -1)),
                      ()))
    return pairs


def verify_group_relations(module, degree=3):
    """Check every defining relation as an exact operator identity on the
    spanning set {a_1, a_2} x {monomials of total degree <= degree}."""
    pairs = _relation_pairs(module)
    elements = module.test_elements(degree)
    checked = 0
    for name, left, right in pairs:
        for label, elem in elements:
            if module.apply_word(elem, left) != module.apply_word(elem, right):
                raise CertificateError(
                    f"relation {name} fails on element {label}", witness=label)
            checked += 1
    return {
        "kind": "group_relations",
        "degree": degree,
        "relations": len(pairs),
        "elements": len(elements),
        "checked": checked,
        "ok": True,
    }


def verify_annihilators(module):
    """a * (1 + x_i - y_i) = 0 exactly for both module generators."""
    checked = []
    for gen_idx in range(2):
        a = module.generator(gen_idx)
        for i in range(module.k):
            residue = module.add(
                module.sub(a, module.act_y(a, i)),
                module.act_x(a, i))
            if residue != module.zero():
                raise CertificateError(
                    f"a_{gen_idx + 1} * (1 + x_{i + 1} - y_{i + 1}) is nonzero",
                    witness=(gen_idx, i))
            checked.append(f"a{gen_idx + 1}*(1+x{i + 1}-y{i + 1})")
    return {"kind": "annihilators", "checked": checked, "ok": True}


def fitting_certificate(n_max=100):
    """Certificate that no nontrivial power of the centre acts nilpotently:
    det(Z^n - I) is nonzero for 1 <= n <= n_max, and the characteristic
    polynomial t^2 - 3t + 1 has discriminant 5, so the eigenvalues are real
    quadratic units, not roots of unity, and the property holds for all n."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    values = []
    power = identity(2)
    for _ in range(n_max):
        power = _mat2_mul(power, Z_MATRIX)
        delta = tuple(tuple(power[i][j] - (1 if i == j else 0) for j in range(2))
                      for i in range(2))
        value = int(det(delta))
        if value == 0:
            raise CertificateError("a power of the centre acts unipotently")
        values.append(value)
    return {
        "kind": "fitting",
        "z_matrix": [list(r) for r in Z_MATRIX],
        "char_poly": list(CHAR_POLY),
        "trace": 3,
        "det": 1,
        "discriminant": 5,
        "n_max": n_max,
        "resultants": values,
        "ok": True,
    }


# --- presentation data ----------------------------------------------------------

class FinitePresentation:
    __slots__ = ("generators", "relators")

    def __init__(self, generators, relators):
        generators = tuple(generators)
        relators = tuple(reduce_word(r) for r in relators)
        names = set(generators)
        for rel in relators:
            for gen, _ in rel:
                if gen not in names:
                    raise ValueError(f"relator uses undeclared generator {gen!r}")
        self.generators = generators
        self.relators = relators

    def relator_strings(self):
        return tuple(format_word(r) for r in self.relators)

    def as_dict(self):
        return {"generators": list(self.generators),
                "relators": list(self.relator_strings())}

    def as_text(self):
        gens = ", ".join(self.generators)
        rels = "\n".join("  " + s for s in self.relator_strings())
        return f"< {gens} |\n{rels}\n>"


def _module_generator_schedule(k):
    """Translation monomials w for the [a', a^w] commutation relators:
    exponents restricted to -1, 0, 1 in each variable."""
    words = []
    for expts in product((0, 1, -1), repeat=k):
        word = tuple((f"x{i + 1}", e) for i, e in enumerate(expts) if e)
        words.append(word)
    return words


def split_extension_presentation(group, level=None):
    """Presentation data for the split extension tower at the given level
    (defaults to the full rank).  Level r has generators
    x_1..x_k, y_1..y_r, z, a_1, a_2.

    The translation-commutation relators are emitted for the finite
    schedule only, so this is presentation data, not a claimed-complete
    finite presentation; the HNN tower data is the faithful description.
    """
    k = group.k
    r = k if level is None else level
    if not 0 <= r <= k:
        raise ValueError("level out of range")
    gens = [f"x{i + 1}" for i in range(k)]
    gens += [f"y{j + 1}" for j in range(r)]
    gens += ["z", "a1", "a2"]

    relators = []
    for i in range(k):
        for j in range(i + 1, k):
            relators.append(commutator_word(((f"x{i + 1}", 1),), ((f"x{j + 1}", 1),)))
    for w in _module_generator_schedule(k):
        if not w:
            relators.append(commutator_word((("a1", 1),), (("a2", 1),)))
            continue
        for a_prime in ("a1", "a2"):
            for a in ("a1", "a2"):
                conj = word_inverse(w) + ((a, 1),) + w
                relators.append(commutator_word(((a_prime, 1),), conj))
    for i in range(k):
        relators.append(commutator_word(((f"x{i + 1}", 1),), (("z", 1),)))
    # a_1^z = a_1 a_2 and a_2^z = a_1 a_2^2
    relators.append(reduce_word(
        (("z", -1), ("a1", 1), ("z", 1), ("a2", -1), ("a1", -1))))
    relators.append(reduce_word(
        (("z", -1), ("a2", 1), ("z", 1), ("a2", -2), ("a1", -1))))
    for j in range(r):
        for i in range(k):
            comm = commutator_word(((f"x{i + 1}", 1),), ((f"y{j + 1}", 1),))
            if i == j:
                comm = reduce_word(comm + (("z", -group.invariants[i]),))
            relators.append(comm)
        relators.append(commutator_word(((f"y{j + 1}", 1),), (("z", 1),)))
        for l in range(j + 1, r):
            relators.append(commutator_word(((f"y{j + 1}", 1),), ((f"y{l + 1}", 1),)))
        # a^{y_j} = a a^{x_j}
        for a in ("a1", "a2"):
            relators.append(reduce_word(
                ((f"y{j + 1}", -1), (a, 1), (f"y{j + 1}", 1))
                + ((f"x{j + 1}", -1), (a, -1), (f"x{j + 1}", 1), (a, -1))))
    return FinitePresentation(gens, relators)


def hnn_tower(group):
    """The ascending HNN tower: each level adds a stable letter acting by
    the recorded endomorphism of the previous level's generators.  This is
    the finite, complete description of the construction."""
    k = group.k
    base_gens = [f"x{i + 1}" for i in range(k)] + ["a1", "a2"]
    levels = [{
        "stable_letter": "z",
        "base_generators": list(base_gens),
        "endomorphism": {
            **{f"x{i + 1}": f"x{i + 1}" for i in range(k)},
            "a1": "a1 a2",
            "a2": "a1 a2^2",
        },
    }]
    for r in range(k):
        prev = base_gens + ["z"] + [f"y{j + 1}" for j in range(r)]
        m = group.invariants[r]
        endo = {g: g for g in prev}
        endo[f"x{r + 1}"] = f"x{r + 1} z^{m}" if m != 1 else f"x{r + 1} z"
        endo["a1"] = f"a1 x{r + 1}^-1 a1 x{r + 1}"
        endo["a2"] = f"a2 x{r + 1}^-1 a2 x{r + 1}"
        levels.append({
            "stable_letter": f"y{r + 1}",
            "base_generators": list(prev),
            "endomorphism": endo,
        })
    return levels
