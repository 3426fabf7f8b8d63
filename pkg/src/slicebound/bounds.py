"""Section-volume bounds: closed forms and quadrature-backed estimates.

Every operation is a pure function from a projected decomposition, a KpBall,
or a nonsymmetric lift to a positive real.  Formulas stated only under a
hypothesis raise GateError when it fails; passing ``force=True`` evaluates
anyway (the report then records the gate as unsatisfied).
"""

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .bodies import KpBall, vol_ball_p, vol_simplex_inradius1
from .decomp import project
from .errors import DegenerateRegimeError, GateError, StructuralError
from .specfun import (
    QuadratureOptions,
    WillsIntegrandParams,
    gamma_fn,
    gamma_p_interpolator,
    sinc_power_integral,
    wills_g,
)

GATE_SLACK = 1e-12
LIMIT_EPS = 1e-9     # 1 - tc below this: use the tc -> 1 limit branch


# ---------------------------------------------------------------------------
# symmetric-body bounds (cube-type sections)


def _check_half_gate(values, label, force):
    bad = np.flatnonzero(np.asarray(values) < 0.5 - GATE_SLACK)
    if bad.size and not force:
        raise GateError(
            f"{label} >= 1/2 fails at indices {bad.tolist()}",
            offending=bad.tolist(),
        )
    return bad.size == 0


def bound_symmetric_case1(proj, force=False):
    """2^((m0+k)/2) * prod_j c_j^(tc_j / 2), valid when all tc_j >= 1/2."""
    _check_half_gate(proj.tilde_weights, "tilde weight", force)
    log_prod = float(np.sum(proj.tilde_weights * np.log(proj.weights))) / 2.0
    return 2.0 ** ((proj.m0 + proj.k) / 2.0) * math.exp(log_prod)


def bound_symmetric_case1_coarse(proj, force=False):
    """2^k ((n - 2k + m0)/(m0 - k))^((m0-k)/2); 2^k when m0 = k."""
    _check_half_gate(proj.tilde_weights, "tilde weight", force)
    m0, k = proj.m0, proj.k
    n = proj.subspace.ambient_dim
    if m0 == k:
        return 2.0 ** k
    return 2.0 ** k * ((n - 2.0 * k + m0) / (m0 - k)) ** ((m0 - k) / 2.0)


def bound_symmetric_case2(n, k):
    """2^((n+k)/2), the large-section regime bound; requires n/2 <= k <= n."""
    if not n / 2.0 <= k <= n:
        raise DegenerateRegimeError(
            f"stated only for n/2 <= k <= n, got n={n}, k={k}"
        )
    return 2.0 ** ((n + k) / 2.0)


def bound_ab_old(proj):
    """Baseline 2^k * prod_j (c_j / tc_j)^(tc_j / 2); no hypothesis."""
    tc = proj.tilde_weights
    log_prod = float(np.sum(tc * (np.log(proj.weights) - np.log(tc)))) / 2.0
    return 2.0 ** proj.k * math.exp(log_prod)


def compare_bl_direct_vs_parseval(proj, force=False):
    """Both routes to the same section bound: (case1 value, baseline value)."""
    return bound_symmetric_case1(proj, force=force), bound_ab_old(proj)


def _sinc_power_value(p):
    # Beyond the quadrature-friendly range the Laplace asymptotic of the
    # sinc-power integral is accurate to ~p^-2 relative.
    if p > 1e5:
        return math.sqrt(6.0 * math.pi / p) * (1.0 - 3.0 / (20.0 * p))
    return sinc_power_integral(p).value


def bound_volume_via_wills(proj):
    """Volume bound assembled from sinc-power integrals:
    2^k / pi^(m0-k) * prod_j (1-tc)^(-1/(2p)) I_p^(1/p) (sqrt(tc) t_j)^tc
    with p_j = 1/(1 - tc_j); factors with tc_j -> 1 use the limit branch."""
    m0, k = proj.m0, proj.k
    log_acc = k * math.log(2.0) - (m0 - k) * math.log(math.pi)
    for tc, t in zip(proj.tilde_weights, proj.thresholds):
        log_acc += tc * math.log(math.sqrt(tc) * t)
        defect = 1.0 - tc
        if defect < LIMIT_EPS:
            continue                       # remaining factors tend to 1
        p = 1.0 / defect
        log_acc += -math.log(defect) / (2.0 * p)
        log_acc += math.log(_sinc_power_value(p)) / p
    return math.exp(log_acc)


def bound_wills_functional(proj, lam, options=QuadratureOptions()):
    """Upper bound on the Wills functional of the lam-scaled section:
    (2 pi)^-(m0-k) * prod_j (integral of the j-th factor)^(1 - tc_j)."""
    if lam <= 0:
        raise StructuralError(f"scale must be positive, got {lam}")
    m0, k = proj.m0, proj.k
    log_acc = -(m0 - k) * math.log(2.0 * math.pi)
    for tc, t in zip(proj.tilde_weights, proj.thresholds):
        alpha = lam * math.sqrt(tc) * t
        defect = 1.0 - tc
        if defect < LIMIT_EPS:
            # p -> infinity: the factor tends to the sup of the Fourier
            # transform, which is its value at 0
            log_acc += math.log(1.0 + 2.0 * alpha)
            continue
        p = 1.0 / defect
        g = wills_g(WillsIntegrandParams(alpha=alpha, p=p))
        factor = g.value / math.sqrt(defect)
        log_acc += defect * math.log(factor)
    return math.exp(log_acc)


def bound_mean_width(proj):
    """First-intrinsic-volume bound 2 * sum_j tc_j t_j; no hypothesis."""
    return 2.0 * float(np.sum(proj.tilde_weights * proj.thresholds))


# ---------------------------------------------------------------------------
# generalized l_p ball bounds


def _ball_projection(ball, H):
    proj = project(ball.decomp, H)
    alphas = ball.alphas[proj.support]
    return proj, alphas


def bound_k1_upper(ball, H):
    """vol(B_1^k) * prod_j (sqrt(c_j)/alpha_j)^(tc_j)."""
    if ball.p != 1.0:
        raise StructuralError("bound stated for p = 1 only")
    proj, alphas = _ball_projection(ball, H)
    log_prod = float(np.sum(
        proj.tilde_weights * (0.5 * np.log(proj.weights) - np.log(alphas))
    ))
    return vol_ball_p(proj.k, 1.0) * math.exp(log_prod)


def bound_k1_intermediate(ball, H):
    """Sharper p = 1 upper bound carrying the Gamma-ratio correction on the
    indices with tc_j < 1; coincides with the plain bound at coordinate H."""
    if ball.p != 1.0:
        raise StructuralError("bound stated for p = 1 only")
    proj, alphas = _ball_projection(ball, H)
    m0, k = proj.m0, proj.k
    log_acc = k * math.log(2.0) - (m0 - k) / 2.0 * math.log(math.pi)
    log_acc += float(np.sum(
        proj.tilde_weights * (0.5 * np.log(proj.weights) - np.log(alphas))
    ))
    for tc in proj.tilde_weights:
        defect = 1.0 - tc
        if defect < LIMIT_EPS:
            continue                       # limit factor is 1
        p = 1.0 / defect
        # log of Gamma(p - 1/2) / (sqrt(defect) Gamma(p)); log-space keeps
        # the ratio finite when p is large
        log_ratio = (math.lgamma(p - 0.5) - math.lgamma(p)
                     - 0.5 * math.log(defect))
        log_acc += defect * log_ratio
    return math.exp(log_acc) / gamma_fn(1.0 + k)


def bound_k1_lower(ball, H):
    """Explicit positive lower bound for p = 1 sections; needs m0 > k."""
    if ball.p != 1.0:
        raise StructuralError("bound stated for p = 1 only")
    proj, alphas = _ball_projection(ball, H)
    m0, k = proj.m0, proj.k
    if m0 == k:
        raise DegenerateRegimeError("lower bound degenerates when m0 = k")
    s = float(np.sum(alphas ** 2 / proj.weights))
    log_acc = m0 * math.log(m0) - (m0 - k) / 2.0 * math.log(math.pi)
    log_acc -= (m0 + k) / 2.0 * math.log(s)
    log_acc += float(np.sum(np.log(alphas) - 0.5 * np.log(proj.weights)))
    log_acc += math.lgamma((m0 + k) / 2.0) - math.lgamma(m0)
    return math.exp(log_acc) * vol_ball_p(k, 1.0)


def bound_kp_upper(ball, H):
    """vol(B_p^k) * prod_j (sqrt(c_j)/alpha_j^(1/p))^(tc_j)."""
    proj, alphas = _ball_projection(ball, H)
    p = ball.p
    log_prod = float(np.sum(
        proj.tilde_weights * (0.5 * np.log(proj.weights) - np.log(alphas) / p)
    ))
    return vol_ball_p(proj.k, p) * math.exp(log_prod)


def bound_kp_lower(ball, H, options=QuadratureOptions(abs_tol=1e-11)):
    """Quadrature lower bound for p in [1, 2] sections; needs m0 > k.

    Integrates t^(beta-1) * prod_j gamma_p(sqrt(t s_j)) over t > 0 with
    beta = (m0-k)/2 and s_j = (c_j / alpha_j^(2/p)) (1 - tc_j); indices with
    tc_j = 1 contribute the constant gamma_p(0)."""
    proj, alphas = _ball_projection(ball, H)
    m0, k = proj.m0, proj.k
    p = ball.p
    if m0 == k:
        raise DegenerateRegimeError("lower bound degenerates when m0 = k")
    beta = (m0 - k) / 2.0
    s = proj.weights / alphas ** (2.0 / p) * (1.0 - proj.tilde_weights)
    s = np.maximum(s, 0.0)
    gp = gamma_p_interpolator(p)
    const = float(np.prod([float(gp(0.0)) for sj in s if sj < LIMIT_EPS]))
    active = s[s >= LIMIT_EPS]

    def integrand(t):
        root = np.sqrt(t * active)
        return t ** (beta - 1.0) * float(np.prod(gp(root)))

    v1, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=options.abs_tol,
                           limit=options.limit)
    v2, _ = integrate.quad(integrand, 1.0, np.inf, epsabs=options.abs_tol,
                           limit=options.limit)
    integral = const * (v1 + v2)
    log_pref = float(np.sum(0.5 * np.log(proj.weights) - np.log(alphas) / p))
    log_pref -= (m0 - k) * math.log(2.0 * math.pi)
    log_pref += beta * math.log(math.pi) + beta * math.log(m0 - k)
    log_pref -= math.log(gamma_fn(beta))
    return math.exp(log_pref) * integral / gamma_fn(1.0 + k / p)


# ---------------------------------------------------------------------------
# non-symmetric bounds


def bound_nonsym_fourier(nl, force=False):
    """Section bound for a centered contact polytope via the lifted system.

    Requires min kappa_j >= 1/2; returns the bound on the section volume
    itself, normalized by the inradius-1 regular k-simplex volume."""
    _check_half_gate(nl.kappa, "kappa", force)
    n, k = nl.n, nl.k
    m = len(nl.support)
    delta = nl.lifted_weights[nl.support]
    log_acc = (k + 1.0 - m) / 2.0 * math.log(2.0)
    log_acc += k / 2.0 * math.log(n) + (k + 1.0) / 2.0 * math.log(n + 1.0)
    log_acc -= k / 2.0 * math.log(k) + (k + 1.0) / 2.0 * math.log(k + 1.0)
    log_acc -= float(np.sum(nl.kappa * np.log(delta))) / 2.0
    return math.exp(log_acc) * vol_simplex_inradius1(k)


def bound_nonsym_hyperplane(n):
    """Hyperplane-section bound for centered bodies in terms of the regular
    simplex: (1/sqrt2) sqrt((n+1)/n) ((n+1)/(n-1))^((n-1)/2) vol(S_{n-1})."""
    if n < 2:
        raise StructuralError(f"need n >= 2, got {n}")
    pref = (1.0 / math.sqrt(2.0)) * math.sqrt((n + 1.0) / n)
    pref *= ((n + 1.0) / (n - 1.0)) ** ((n - 1) / 2.0)
    return pref * vol_simplex_inradius1(n - 1)


# ---------------------------------------------------------------------------
# report assembly

SYMMETRIC_BOUNDS = (
    "symmetric_case1", "symmetric_case1_coarse", "symmetric_case2", "ab_old",
    "wills_volume", "wills_functional", "mean_width",
)
KP_BOUNDS = ("k1_upper", "k1_intermediate", "k1_lower", "kp_upper", "kp_lower")
NONSYM_BOUNDS = ("nonsym_fourier", "nonsym_hyperplane")
ALL_BOUNDS = SYMMETRIC_BOUNDS + KP_BOUNDS + NONSYM_BOUNDS

_NO_GATE = {"required_condition": "none", "satisfied": True}


@dataclass
class BoundReport:
    """Named bound values with gate status and input digests."""

    entries: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, name, value, gate=None, digest=""):
        if not math.isfinite(value) or value <= 0:
            raise StructuralError(f"bound {name} produced non-positive {value}")
        self.entries.append({
            "name": name,
            "value": float(value),
            "gate": dict(gate) if gate else dict(_NO_GATE),
            "inputs_digest": digest,
        })

    def value(self, name):
        for e in self.entries:
            if e["name"] == name:
                return e["value"]
        raise KeyError(name)

    def gates_satisfied(self):
        return all(e["gate"]["satisfied"] for e in self.entries)

    def to_dict(self):
        return {"entries": self.entries, "metadata": self.metadata}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def inputs_digest(*arrays):
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(np.asarray(a, dtype=float)).tobytes())
    return h.hexdigest()[:16]


def _gate_dict(condition, satisfied):
    return {"required_condition": condition, "satisfied": bool(satisfied)}


def build_report(names="all", proj=None, ball=None, subspace=None, nl=None,
                 force=False, lam=1.0, metadata=None):
    """Evaluate the named bounds against whichever inputs are supplied.

    names may be "all" (every bound applicable to the given inputs) or an
    explicit list; asking for a bound whose inputs are missing, or for an
    unknown name, is a structural error.
    """
    if names == "all":
        wanted = []
        if proj is not None:
            wanted += [n for n in SYMMETRIC_BOUNDS if n != "symmetric_case2"]
        if ball is not None and subspace is not None:
            wanted += list(KP_BOUNDS) if ball.p == 1.0 else ["kp_upper", "kp_lower"]
        if nl is not None:
            wanted += list(NONSYM_BOUNDS)
    else:
        wanted = list(names)
        unknown = [n for n in wanted if n not in ALL_BOUNDS]
        if unknown:
            raise StructuralError(
                f"unknown bound identifiers {unknown}; valid names: "
                + ", ".join(ALL_BOUNDS)
            )
    report = BoundReport(metadata=dict(metadata or {}))
    for name in wanted:
        report.entries.append(_evaluate_one(
            name, proj=proj, ball=ball, subspace=subspace, nl=nl,
            force=force, lam=lam,
        ))
    return report


def _evaluate_one(name, proj, ball, subspace, nl, force, lam):
    if name in SYMMETRIC_BOUNDS:
        if proj is None:
            raise StructuralError(f"bound {name} needs a projected system")
        digest = inputs_digest(proj.directions, proj.tilde_weights,
                               proj.thresholds)
        gate = dict(_NO_GATE)
        if name in ("symmetric_case1", "symmetric_case1_coarse"):
            ok = bool(np.all(proj.tilde_weights >= 0.5 - GATE_SLACK))
            gate = _gate_dict("all tilde weights >= 1/2", ok)
            fn = (bound_symmetric_case1 if name == "symmetric_case1"
                  else bound_symmetric_case1_coarse)
            value = fn(proj, force=force)
        elif name == "symmetric_case2":
            n, k = proj.subspace.ambient_dim, proj.k
            gate = _gate_dict("n/2 <= k <= n", n / 2.0 <= k <= n)
            value = bound_symmetric_case2(n, k)
        elif name == "ab_old":
            value = bound_ab_old(proj)
        elif name == "wills_volume":
            value = bound_volume_via_wills(proj)
        elif name == "wills_functional":
            value = bound_wills_functional(proj, lam)
        else:
            value = bound_mean_width(proj)
    elif name in KP_BOUNDS:
        if ball is None or subspace is None:
            raise StructuralError(f"bound {name} needs a KpBall and subspace")
        digest = inputs_digest(ball.decomp.vectors, ball.decomp.weights,
                               ball.alphas, [ball.p], subspace.basis)
        gate = dict(_NO_GATE)
        fn = {
            "k1_upper": bound_k1_upper,
            "k1_intermediate": bound_k1_intermediate,
            "k1_lower": bound_k1_lower,
            "kp_upper": bound_kp_upper,
            "kp_lower": bound_kp_lower,
        }[name]
        value = fn(ball, subspace)
    else:
        if nl is None:
            raise StructuralError(f"bound {name} needs a nonsymmetric lift")
        digest = inputs_digest(nl.lifted_vectors, nl.lifted_weights, nl.kappa)
        if name == "nonsym_fourier":
            ok = bool(np.all(nl.kappa >= 0.5 - GATE_SLACK))
            gate = _gate_dict("all kappa >= 1/2", ok)
            value = bound_nonsym_fourier(nl, force=force)
        else:
            ok = bool(np.all(nl.kappa >= 0.5 - GATE_SLACK))
            gate = _gate_dict("all kappa >= 1/2 (reported alongside)", ok)
            value = bound_nonsym_hyperplane(nl.n)
    if not math.isfinite(value) or value <= 0:
        raise StructuralError(f"bound {name} produced non-positive {value}")
    return {"name": name, "value": float(value), "gate": gate,
            "inputs_digest": digest}
