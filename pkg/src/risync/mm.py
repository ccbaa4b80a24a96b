"""Alternating phase/equalizer design by majorization-minimization.

The design objective is the block MSE between the equalized received samples
and the zero-ISI windowed symbols.  For any phase vector the optimal linear
equalizer is closed form, which reduces the problem to maximizing the
"reduction" term

    red(theta) = tr( W Rs^H/2 X^H (X X^H + Rv)^-1 X Rs^1/2 W^H ),

where X is the effective symbols-to-samples map and W the zero-ISI window.
``red`` is lower-bounded by its tangent plane (it is jointly convex in X and
the sample covariance), and the remaining quadratic piece is majorized by a
norm-product quadratic, leaving a linear function of the phases whose
constrained maximizer is elementwise phase alignment.  Iterating this never
decreases ``red``.
"""

import time
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import ConstraintError, NumericError, ParameterError
from .sysmodel import _theta_array, effective_channel, mse_no_equalizer

RESIDUE_TOL = 1e-9


def as_real(value, tol=RESIDUE_TOL, what="trace"):
    """Real part of a mathematically-real scalar.

    Raises NumericError if the imaginary residue exceeds ``tol`` (relative
    above unit magnitude): anything larger indicates an implementation bug,
    not rounding.
    """
    value = complex(value)
    if not np.isfinite(value.real) or not np.isfinite(value.imag):
        raise NumericError(f"non-finite {what}: {value}")
    if abs(value.imag) > tol * max(1.0, abs(value.real)):
        raise NumericError(
            f"{what} has imaginary residue {value.imag:.3e} beyond tolerance")
    return value.real


def induced_one_norm(mat):
    """Induced 1-norm (maximum absolute column sum)."""
    mat = np.atleast_2d(mat)
    return float(np.max(np.sum(np.abs(mat), axis=0)))


def _factor_covariance(cov):
    """Cholesky factor of the sample covariance, with numeric diagnostics."""
    try:
        return cho_factor(cov, lower=True)
    except (LinAlgError, ValueError) as exc:
        raise NumericError(f"covariance factorization failed: {exc}") from exc


@dataclass(frozen=True)
class PhaseSolution:
    """Unit-modulus phase vector for all surfaces, flattened surface-major.

    ``quantized`` records the phase-grid resolution in bits when the entries
    are restricted to the uniform grid, else None.
    """

    theta: np.ndarray
    quantized: int | None = None

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=complex).ravel()
        if theta.size and not np.all(np.isfinite(theta)):
            raise ConstraintError("phases must be finite")
        dev = float(np.max(np.abs(np.abs(theta) - 1.0))) if theta.size else 0.0
        if dev > RESIDUE_TOL:
            raise ConstraintError(
                f"phases deviate from unit modulus by {dev:.3e}")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)


@dataclass(frozen=True)
class OptimizationResult:
    """Outcome of one phase-design run.

    ``trace`` holds the reduction objective at the initial point and after
    every update; it is non-decreasing.  ``mse_final`` is the full MSE of the
    final phases with their optimal equalizer and satisfies
    ``mse_final = mse_no_equalizer - trace[-1]``.
    """

    theta_final: PhaseSolution
    equalizer: np.ndarray
    trace: np.ndarray
    mse_final: float
    iterations: int
    converged: bool
    iter_ms: np.ndarray


def optimal_equalizer(x, window, noise_power, symbol_power):
    """MMSE equalizer for effective channel ``x``: (obs_len, M).

    G = sqrt(symbol_power) * window @ x^H @ (x x^H + noise_power I)^-1,
    computed through a Cholesky solve of the Hermitian positive-definite
    sample covariance (never an explicit inverse).
    """
    x = np.asarray(x)
    if noise_power <= 0:
        raise ParameterError(f"noise power must be > 0, got {noise_power}")
    cov = x @ x.conj().T + noise_power * np.eye(x.shape[0])
    cho = _factor_covariance(cov)
    gh = np.sqrt(symbol_power) * cho_solve(cho, x @ window.T.conj())
    return gh.conj().T


def equalizer_for(model, theta):
    """Optimal equalizer of ``theta`` under ``model``."""
    return optimal_equalizer(effective_channel(model, theta), model.window,
                             model.noise_power, model.symbol_power)


def mse_full(theta, equalizer, model):
    """Block MSE of (theta, equalizer): window target vs equalized samples.

    Expectation over symbols (power ``symbol_power``) and noise, evaluated in
    closed form; valid for any equalizer, optimal or not.  Always real and
    non-negative.
    """
    es = model.symbol_power
    x = effective_channel(model, theta)
    gx = equalizer @ x
    term_win = es * float(np.sum(model.window * model.window))
    term_cross = -2.0 * np.sqrt(es) * float(np.real(np.sum(gx * np.conj(model.window))))
    term_sig = as_real(np.vdot(gx, gx), what="signal term")
    term_noise = model.noise_power * as_real(np.vdot(equalizer, equalizer),
                                             what="noise term")
    total = term_win + term_cross + term_sig + term_noise
    if total < -RESIDUE_TOL:
        raise NumericError(f"negative MSE {total:.3e}")
    return max(total, 0.0)


def _iteration_state(model, theta):
    """Effective channel, covariance factor, tangent filter and reduction."""
    x = effective_channel(model, theta)
    cov = x @ x.conj().T + model.noise_power * np.eye(x.shape[0])
    cho = _factor_covariance(cov)
    y = np.sqrt(model.symbol_power) * (x @ model.window.T)
    filt = cho_solve(cho, y)
    red = as_real(np.vdot(y, filt), what="reduction")
    return x, cho, filt, red


def mse_reduction(theta, model):
    """Reduction achieved by the optimal equalizer at ``theta``:

        mse_full(theta, optimal G) = mse_no_equalizer - mse_reduction(theta).

    Non-negative, invariant under a global phase rotation of ``theta``.
    """
    return _iteration_state(model, theta)[3]


def linearization_filter(model, theta):
    """Tangent-plane filter of the reduction at ``theta``: (M, obs_len).

    F = (X X^H + noise I)^-1 X Rs^1/2 W^H; its conjugate transpose is the
    optimal equalizer.  Coefficients of the lower bound

        red(Z) >= red(X) + 2 Re tr(F^H (Z - X) Rs^1/2 W^H)
                  - tr(F^H (Z Z^H - X X^H) F).
    """
    return _iteration_state(model, theta)[2]


def _linear_terms(x, filt, model):
    """2 Re tr(F^H X Rs^1/2 W^H) and tr(F^H X X^H F) for bound evaluation."""
    y = np.sqrt(model.symbol_power) * (x @ model.window.T)
    lin = 2.0 * float(np.real(np.vdot(filt, y)))
    fx = filt.conj().T @ x
    quad = as_real(np.vdot(fx, fx), what="bound quadratic")
    return lin, quad


def linearized_bound(theta, theta_t, model):
    """Tangent lower bound of the reduction, anchored at ``theta_t`` and
    evaluated at ``theta``.  Equals the reduction when theta == theta_t."""
    x_t, _, filt, red_t = _iteration_state(model, theta_t)
    x = effective_channel(model, theta)
    lin, quad = _linear_terms(x, filt, model)
    lin_t, quad_t = _linear_terms(x_t, filt, model)
    return red_t + (lin - quad) - (lin_t - quad_t)


def _check_psd(mat, name):
    mat = np.asarray(mat)
    scale = max(1.0, float(np.max(np.abs(mat))) if mat.size else 0.0)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ParameterError(f"{name} must be square, got {mat.shape}")
    if np.max(np.abs(mat - mat.conj().T)) > RESIDUE_TOL * scale:
        raise ParameterError(f"{name} must be Hermitian")
    if np.min(np.linalg.eigvalsh(mat)) < -RESIDUE_TOL * scale:
        raise ParameterError(f"{name} must be positive semidefinite")
    return mat


def quadratic_majorizer(m_mat, z_mat, x_t):
    """Norm-product majorizer of X -> tr(Z X M X^H) around ``x_t``.

    For Hermitian PSD M and Z, with lam = ||M||_1 ||Z||_1 (induced norms,
    an upper bound on the largest eigenvalue of their Kronecker product):

        tr(Z X M X^H) <= lam ||X||_F^2 - 2 Re tr(coef^H X)
                         + lam ||x_t||_F^2 - tr(Z x_t M x_t^H),

    with equality at X = x_t.  Returns (lam, coef) where
    coef = lam * x_t - Z x_t M.
    """
    m_mat = _check_psd(m_mat, "M")
    z_mat = _check_psd(z_mat, "Z")
    x_t = np.asarray(x_t)
    if x_t.shape != (z_mat.shape[0], m_mat.shape[0]):
        raise ParameterError(
            f"anchor shape {x_t.shape} does not match Z {z_mat.shape} / M {m_mat.shape}")
    lam = induced_one_norm(m_mat) * induced_one_norm(z_mat)
    coef = lam * x_t - z_mat @ x_t @ m_mat
    return lam, coef


def _filter_blocks(model, filt):
    """Per-surface projections F^H D_k, shape (K, obs_len, block_len)."""
    return np.einsum("mo,kml->kol", filt.conj(), model.delay_blocks)


def majorizer_coefficient(model, filt):
    """Norm-product coefficient for the element-level quadratic form.

    Equals symbol_power times the induced 1-norm of the Gram matrix of the
    filtered element-level map, computed blockwise from per-surface
    projections: column sums factor into per-surface magnitudes, so the
    (K*N*block_len)^2 Gram matrix is never formed.
    """
    wmats = _filter_blocks(model, filt)
    # gram block (a, b) is conj(c_a) c_b * (W_a^H W_b); |column sum| factors
    pair = np.einsum("aor,bom->abrm", wmats.conj(), wmats)
    colsum = np.sum(np.abs(pair), axis=2)                    # (K, K, block_len)
    mags = np.abs(model.cascade)
    weights = np.sum(mags, axis=1)                            # sum_n |c_k[n]|
    weighted = np.tensordot(weights, colsum, axes=(0, 0))     # (K, block_len)
    per_surface = np.max(mags, axis=1) * np.max(weighted, axis=1)
    return model.symbol_power * float(np.max(per_surface))


def phase_update_matrix(theta_t, filt, lam, model):
    """Linear coefficient matrix of the phase subproblem, (block_len, N*K*block_len).

    Column block (k, n) equals

        lam * conj(theta[k,n]) I + c[k,n] * (es W^T F^H D_k - sqrt(es) X^H F F^H D_k)

    assembled per surface; the per-element map itself is never materialized.
    """
    th = _theta_array(theta_t, model)
    es = model.symbol_power
    x_t = effective_channel(model, theta_t)
    wmats = _filter_blocks(model, filt)                       # (K, obs, L)
    vmat = x_t.conj().T @ filt                                # (L, obs)
    per_surface = (es * np.einsum("ol,kom->klm", model.window, wmats)
                   - np.sqrt(es) * np.einsum("lo,kom->klm", vmat, wmats))
    blocks = np.einsum("kn,klm->knlm", model.cascade, per_surface)
    blocks = blocks + (lam * np.conj(th).reshape(model.cascade.shape)[:, :, None, None]
                       * np.eye(model.block_len))
    l = model.block_len
    return blocks.transpose(2, 0, 1, 3).reshape(l, -1)


def block_traces(b_mat, block_len):
    """Traces of the consecutive square column blocks of ``b_mat``."""
    rows, cols = np.shape(b_mat)
    if rows != block_len or cols % block_len:
        raise ParameterError(
            f"matrix {b_mat.shape} is not a row of {block_len}-blocks")
    return np.einsum("lal->a", np.reshape(b_mat, (block_len, -1, block_len)))


def update_phases(b_mat, block_len, prev=None):
    """Constrained maximizer of 2 Re tr(B Theta): align against block traces.

    Element a gets conj(trace_a)/|trace_a|; a vanishing trace leaves the
    objective flat in that element, so the previous phase (or 1) is kept.
    """
    traces = block_traces(b_mat, block_len)
    mags = np.abs(traces)
    fallback = np.ones(traces.size, dtype=complex) if prev is None \
        else np.asarray(getattr(prev, "theta", prev), dtype=complex).ravel()
    out = np.where(mags > 0.0, np.conj(traces) / np.where(mags > 0.0, mags, 1.0),
                   fallback)
    return out


def quantize_phases(theta, bits):
    """Project each phase onto the uniform grid {2 pi m / 2^bits}.

    Nearest grid point in angle; exact ties go to the numerically smaller
    angle in [0, 2 pi).  Accepts an array or a PhaseSolution and returns the
    same kind; idempotent.
    """
    if bits < 1:
        raise ParameterError(f"phase resolution must be >= 1 bit, got {bits}")
    arr = np.asarray(getattr(theta, "theta", theta), dtype=complex)
    levels = 2 ** int(bits)
    pos = np.angle(arr) * levels / (2.0 * np.pi)
    lo = np.floor(pos)
    frac = pos - lo
    idx = np.where(frac > 0.5, lo + 1.0, lo)
    tie = frac == 0.5
    if np.any(tie):
        cand = np.stack([np.mod(lo, levels), np.mod(lo + 1.0, levels)])
        idx = np.where(tie, np.min(cand, axis=0), idx)
    out = np.exp(2j * np.pi * np.mod(idx, levels) / levels)
    if isinstance(theta, PhaseSolution):
        return PhaseSolution(out, quantized=int(bits))
    return out


def surrogate_value(theta, theta_t, model):
    """Value at ``theta`` of the full minorizer anchored at ``theta_t``:
    tangent plane of the reduction plus the norm-product majorization of its
    quadratic part.  Touches the reduction at theta == theta_t and never
    exceeds it elsewhere."""
    th = _theta_array(theta, model)
    th_t = _theta_array(theta_t, model)
    _, _, filt, red_t = _iteration_state(model, theta_t)
    lam = majorizer_coefficient(model, filt)
    b_mat = phase_update_matrix(theta_t, filt, lam, model)
    traces = block_traces(b_mat, model.block_len)
    return red_t + 2.0 * float(np.real(np.sum(traces * (th - th_t))))


def optimize_phases(model, init=None, tol=1e-4, max_iters=500, quant_bits=None,
                    record_time=False):
    """Monotone phase design: alternate tangent bound, norm-product
    majorization and elementwise alignment until the reduction stalls.

    Parameters
    ----------
    model : ModelMatrices
    init : array_like or PhaseSolution, optional
        Starting phases; defaults to cascade phase alignment.  With
        ``quant_bits`` set, the start is projected onto the grid first so
        every iterate is feasible.
    tol : float
        Relative-change stopping threshold on the reduction.
    max_iters : int
        Cap on the number of phase updates.
    quant_bits : int, optional
        Restrict phases to the 2^bits uniform grid (projection after every
        update, which is the exact discrete maximizer of the surrogate).
    record_time : bool
        Collect per-iteration wall-clock milliseconds.
    """
    if tol <= 0:
        raise ParameterError(f"tol must be > 0, got {tol}")
    if max_iters < 1:
        raise ParameterError(f"max_iters must be >= 1, got {max_iters}")
    if init is None:
        from .baselines import perfect_sync_alignment
        init = perfect_sync_alignment(model.channel)
    theta = _theta_array(init, model).copy()
    if quant_bits is not None:
        theta = quantize_phases(theta, quant_bits)

    eps_mach = float(np.finfo(float).eps)
    trace, times = [], []
    converged = False
    x = None
    for it in range(max_iters + 1):
        tic = time.perf_counter()
        x, _, filt, red = _iteration_state(model, theta)
        if not np.isfinite(red):
            raise NumericError(f"non-finite reduction at iteration {it}")
        trace.append(red)
        if it > 0:
            times.append(1e3 * (time.perf_counter() - tic_prev))
            if abs(trace[-1] - trace[-2]) < tol * max(trace[-2], eps_mach):
                converged = True
                break
        if it == max_iters:
            break
        lam = majorizer_coefficient(model, filt)
        b_mat = phase_update_matrix(theta, filt, lam, model)
        theta = update_phases(b_mat, model.block_len, prev=theta)
        if quant_bits is not None:
            theta = quantize_phases(theta, quant_bits)
        tic_prev = tic

    equalizer = optimal_equalizer(x, model.window, model.noise_power,
                                  model.symbol_power)
    solution = PhaseSolution(theta, quantized=quant_bits)
    mse_final = mse_full(solution, equalizer, model)
    return OptimizationResult(
        theta_final=solution,
        equalizer=equalizer,
        trace=np.asarray(trace),
        mse_final=mse_final,
        iterations=len(trace) - 1,
        converged=converged,
        iter_ms=np.asarray(times) if record_time else np.array([]),
    )
