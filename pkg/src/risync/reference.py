"""Dense reference implementations used only by tests and validation.

These materialize the block/Kronecker-structured operators that the
production code keeps implicit, so structured results can be checked against
literal matrix products.  Sizes grow like K*N*block_len squared; keep the
dimensions small.
"""

import numpy as np

from .sysmodel import PhaseExpansion, cascade_rows


def induced_one_norm(mat):
    """Induced 1-norm: maximum absolute column sum."""
    mat = np.atleast_2d(mat)
    return float(np.max(np.sum(np.abs(mat), axis=0)))


def _block_rows(rows):
    """(K, N) rows -> (K, K*N) block-diagonal layout of row vectors."""
    k, n = rows.shape
    out = np.zeros((k, k * n), dtype=rows.dtype)
    for i in range(k):
        out[i, i * n:(i + 1) * n] = rows[i]
    return out


def dense_dest_matrix(channel, block_len):
    """blk[conj(dest_k)^T] expanded over the symbol dimension: (K*L, N*K*L)."""
    return np.kron(_block_rows(np.conj(channel.dest)), np.eye(block_len))


def dense_source_matrix(channel, block_len):
    """Stacked source vectors expanded over the symbol dimension: (N*K*L, L)."""
    col = channel.source.reshape(-1, 1)
    return np.kron(col, np.eye(block_len))


def dense_phase_matrix(theta, block_len):
    """Diagonal of all phases expanded over the symbol dimension."""
    theta = np.asarray(getattr(theta, "theta", theta), dtype=complex).ravel()
    return np.kron(np.diag(theta), np.eye(block_len))


def dense_cascade_matrix(channel, block_len):
    """blk[cascade rows] expanded over the symbol dimension: (K*L, N*K*L)."""
    return np.kron(_block_rows(cascade_rows(channel)), np.eye(block_len))


def dense_theta(theta, block_len):
    """Phase vector expanded to its (N*K*L, L) block form."""
    theta = np.asarray(getattr(theta, "theta", theta), dtype=complex).ravel()
    return PhaseExpansion(theta, block_len, tol=np.inf).dense()


def dense_element_map(model):
    """Delay bank times the dense cascade matrix: (M, N*K*L).

    Column block (k, n) equals cascade[k, n] times the delay matrix of
    surface k; the structured code never forms this.
    """
    return model.delay_bank @ dense_cascade_matrix(model.channel, model.block_len)


def dense_effective_channel(model, theta):
    """Literal sqrt(es) * delay_bank @ cascade_expansion @ theta_expansion."""
    prod = dense_element_map(model) @ dense_theta(theta, model.block_len)
    return np.sqrt(model.symbol_power) * prod


def dense_majorizer_coefficient(model, filt):
    """Norm-product coefficient from the literal element-level Gram matrix."""
    emap = dense_element_map(model)
    gram = emap.conj().T @ (filt @ filt.conj().T) @ emap
    return model.symbol_power * induced_one_norm(gram)


def dense_phase_update_matrix(theta_t, filt, lam, model):
    """Literal assembly of the linear update matrix (block_len, N*K*L)."""
    es = model.symbol_power
    emap = dense_element_map(model)
    th = dense_theta(theta_t, model.block_len)
    x_t = np.sqrt(es) * (emap @ th)
    term_win = es * model.window.conj().T @ filt.conj().T @ emap
    term_lin = np.sqrt(es) * x_t.conj().T @ filt @ filt.conj().T @ emap
    return lam * th.conj().T + term_win - term_lin
