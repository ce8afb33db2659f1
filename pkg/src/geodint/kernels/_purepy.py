"""Pure numpy implementation of the MLP evaluation kernels.

Activation codes: 0 = identity, 1 = tanh, 2 = relu, 3 = sigmoid.
The relu derivative uses the subgradient 0 at exactly 0.
"""

import numpy as np

ACT_IDENTITY = 0
ACT_TANH = 1
ACT_RELU = 2
ACT_SIGMOID = 3


def _apply_act(pre, code):
    if code == ACT_IDENTITY:
        return pre
    if code == ACT_TANH:
        return np.tanh(pre)
    if code == ACT_RELU:
        return np.maximum(pre, 0.0)
    if code == ACT_SIGMOID:
        return 1.0 / (1.0 + np.exp(-pre))
    raise ValueError(f"unknown activation code {code}")


def _act_deriv(pre, post, code):
    if code == ACT_IDENTITY:
        return np.ones_like(pre)
    if code == ACT_TANH:
        return 1.0 - post * post
    if code == ACT_RELU:
        return (pre > 0.0).astype(np.float64)
    if code == ACT_SIGMOID:
        return post * (1.0 - post)
    raise ValueError(f"unknown activation code {code}")


def pack(weights, biases, acts):
    """Keep transposed weight copies around so the forward is one GEMM per layer."""
    Wt = [np.ascontiguousarray(W.T, dtype=np.float64) for W in weights]
    return (list(weights), Wt, list(biases), [int(a) for a in acts])


def mlp_forward(Z, packed):
    """Batched forward pass. Z: (n, d_z) -> (n, d_x)."""
    _, Wt, biases, acts = packed
    H = np.asarray(Z, dtype=np.float64)
    for W_t, b, code in zip(Wt, biases, acts):
        H = _apply_act(H @ W_t + b, code)
    return H


def mlp_forward_jacobian(Z, packed):
    """Batched forward pass with exact chain-rule Jacobians.

    Returns (X, J) with X: (n, d_x) and J: (n, d_x, d_z).
    """
    weights, Wt, biases, acts = packed
    Z = np.asarray(Z, dtype=np.float64)
    n, d_z = Z.shape
    H = Z
    # running Jacobian dH/dZ, shape (n, width, d_z)
    M = np.broadcast_to(np.eye(d_z), (n, d_z, d_z)).copy()
    for W, W_t, b, code in zip(weights, Wt, biases, acts):
        pre = H @ W_t + b
        H = _apply_act(pre, code)
        D = _act_deriv(pre, H, code)
        M = D[:, :, None] * np.matmul(W, M)
    return H, M
