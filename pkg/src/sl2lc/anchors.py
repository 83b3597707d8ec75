"""
Check names, the identity each one verifies, and the suites they belong to.
"""

# =============================================================================
# Check names
# =============================================================================

LOCAL_COEFFICIENT = "theorem-A"
WHITTAKER_DENOMINATOR = "whittaker-denominator"
SHELL_VANISHING = "shell-vanishing"
PRINCIPAL_VALUE_STABILITY = "principal-value-stability"
INTERTWINING = "intertwining"
PLANCHEREL = "plancherel"
FUNCTIONAL_EQUATION = "functional-equation"
SQUARE_ROOT = "square-root"
GAUSS_SUM_MODULUS = "gauss-sum-modulus"
GAUSS_SUM_SUPPORT = "gauss-sum-support"
HECKE_SQUARE = "hecke-square"
HECKE_BASIS_CLOSURE = "hecke-basis-closure"
IOTA_COMPATIBILITY = "iota-compatibility"
SIGN_ACTION = "sign-action"
S_DELTA = "s-delta"

# Randomized property checks
CYCLOTOMIC_AXIOMS = "cyclotomic-axioms"
PADIC_LAWS = "padic-laws"
CHARACTER_LAWS = "character-laws"
CELL_ROUND_TRIP = "cell-round-trip"
K_PARTITION = "k-partition"
WHITTAKER_SUPPORT = "whittaker-support"

# =============================================================================
# Identity verified by each check
# =============================================================================

ANCHORS = {
    LOCAL_COEFFICIENT: "Omega(f_I2) / Omega'(A(w0) f_I2) = eta~(-p^n) tau(eta, psi, p^-n) q^n X^n",
    WHITTAKER_DENOMINATOR: "Omega'(A(w0) f_I2) = eps q^-n",
    SHELL_VANISHING: "only the shell v(x) = -n contributes to Omega(f_I2)",
    PRINCIPAL_VALUE_STABILITY: "Omega at depth m equals Omega at depth m + 2",
    INTERTWINING: "A(w0) f_I2 = eps q^-n f_w0, A(w0^-1) f_w0 = eps f_I2",
    PLANCHEREL: "A(w0^-1) A(w0) = q^-n, mu = q^n",
    FUNCTIONAL_EQUATION: "C(s, eta~) C(1 - s, eta~^-1) = eps",
    SQUARE_ROOT: "tau(eta, psi, p^-n) tau(eta^-1, psi^-1, p^-n) = q^-n, |C|^2 = q^n",
    GAUSS_SUM_MODULUS: "tau(eta, psi, p^-n) * conj(tau) = q^-n",
    GAUSS_SUM_SUPPORT: "tau(eta, psi, c) = 0 unless v(c) = -n",
    HECKE_SQUARE: "T_w0 * T_w0 = eps q^n T_I2, T*_w0^2 = T*_I2",
    HECKE_BASIS_CLOSURE: "T_I2 is the unit of the Hecke algebra",
    IOTA_COMPATIBILITY: "f_w(k) = T~_w(k) on K for the contragredient character",
    SIGN_ACTION: (
        "T_w0 phi_I2 = eps phi_w0, T_w0 phi_w0 = q^n phi_I2, T*_w0 v* = -v*, "
        "(A * B) * v = A * (B * v)"
    ),
    S_DELTA: "projection of phi_I2 is ch, projection of phi_w0 is the Gauss sum shell",
    CYCLOTOMIC_AXIOMS: "field axioms and canonical form in Q(zeta_N)",
    PADIC_LAWS: "v(xy) = v(x) + v(y), v(x + y) >= min(v(x), v(y))",
    CHARACTER_LAWS: "eta(xy) = eta(x) eta(y), eta^2 = 1, psi(x + y) = psi(x) psi(y)",
    CELL_ROUND_TRIP: "cell_decompose(g).reassemble() = g",
    K_PARTITION: "K = J u J w0 J u intermediate, disjoint",
    WHITTAKER_SUPPORT: "T_w0 phi = 0 off U J u U w0 J, phi(-g) = eps phi(g)",
}

# =============================================================================
# Suites
# =============================================================================

SUITES = {
    "local-coefficient": (
        LOCAL_COEFFICIENT,
        WHITTAKER_DENOMINATOR,
        SHELL_VANISHING,
        PRINCIPAL_VALUE_STABILITY,
    ),
    "plancherel": (INTERTWINING, PLANCHEREL),
    "functional-equation": (FUNCTIONAL_EQUATION, SQUARE_ROOT),
    "gauss-sum": (GAUSS_SUM_MODULUS, GAUSS_SUM_SUPPORT),
    "hecke-algebra": (HECKE_SQUARE, HECKE_BASIS_CLOSURE, IOTA_COMPATIBILITY),
    "gelfand-graev": (SIGN_ACTION, S_DELTA),
    "invariants": (
        CYCLOTOMIC_AXIOMS,
        PADIC_LAWS,
        CHARACTER_LAWS,
        CELL_ROUND_TRIP,
        K_PARTITION,
        WHITTAKER_SUPPORT,
    ),
}

# Every statement the harness reproduces, with the checks that cover it
STATEMENTS = {
    "local coefficient": (LOCAL_COEFFICIENT, WHITTAKER_DENOMINATOR),
    "only the last shell": (SHELL_VANISHING,),
    "intertwining coefficients": (INTERTWINING,),
    "plancherel measure": (PLANCHEREL,),
    "functional equation": (FUNCTIONAL_EQUATION,),
    "square root": (SQUARE_ROOT, GAUSS_SUM_MODULUS),
    "hecke algebra relation": (HECKE_SQUARE, HECKE_BASIS_CLOSURE),
    "hecke-whittaker action": (SIGN_ACTION,),
    "gelfand-graev projection": (S_DELTA,),
}


def get_anchor(name: str) -> str:
    """Get the identity verified by a check."""
    return ANCHORS.get(name, f"UNKNOWN_CHECK_{name}")


def get_suite_checks(suite: str) -> tuple[str, ...]:
    """
    Get the checks of a suite, or of every suite for ``"all"``.

    Raises:
        KeyError: If the suite is unknown
    """
    if suite == "all":
        return tuple(name for names in SUITES.values() for name in names)
    return SUITES[suite]


def missing_statements() -> list[str]:
    """Statements with a covering check absent from every suite."""
    registered = set(get_suite_checks("all"))
    return [s for s, checks in STATEMENTS.items() if not set(checks) <= registered]
