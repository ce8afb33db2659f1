# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled MLP evaluation kernels.

Mirror of geodint.kernels._purepy: batched forward pass and forward
pass with chain-rule Jacobians. Layer loops run in C with preallocated
per-layer buffers; the Python-visible behavior (including the relu
subgradient 0 at exactly 0) is identical to the pure backend.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, tanh

cnp.import_array()

ACT_IDENTITY = 0
ACT_TANH = 1
ACT_RELU = 2
ACT_SIGMOID = 3


cdef inline double _act(double pre, int code) noexcept nogil:
    if code == 1:
        return tanh(pre)
    if code == 2:
        return pre if pre > 0.0 else 0.0
    if code == 3:
        return 1.0 / (1.0 + exp(-pre))
    return pre


cdef inline double _act_deriv(double pre, double post, int code) noexcept nogil:
    if code == 1:
        return 1.0 - post * post
    if code == 2:
        return 1.0 if pre > 0.0 else 0.0
    if code == 3:
        return post * (1.0 - post)
    return 1.0


def pack(weights, biases, acts):
    """Flatten the layer list into contiguous arrays for the C loops.

    Called once per generator; the returned tuple is passed back into
    the kernel functions.
    """
    dims = [weights[0].shape[1]] + [w.shape[0] for w in weights]
    w_flat = np.concatenate([np.ascontiguousarray(w, dtype=np.float64).ravel()
                             for w in weights])
    b_flat = np.concatenate([np.ascontiguousarray(b, dtype=np.float64)
                             for b in biases])
    return (np.asarray(dims, dtype=np.int64), w_flat, b_flat,
            np.asarray(acts, dtype=np.int32))


def mlp_forward(Z, packed):
    Z = np.ascontiguousarray(Z, dtype=np.float64)
    dims, w_flat, b_flat, codes = packed
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Za = Z
    cdef cnp.ndarray[cnp.int64_t, ndim=1] dims_a = dims
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w_a = w_flat
    cdef cnp.ndarray[cnp.float64_t, ndim=1] b_a = b_flat
    cdef cnp.ndarray[cnp.int32_t, ndim=1] codes_a = codes

    cdef Py_ssize_t n = Za.shape[0]
    cdef Py_ssize_t n_layers = codes_a.shape[0]
    cdef Py_ssize_t width_max = 0
    cdef Py_ssize_t i
    for i in range(dims_a.shape[0]):
        if dims_a[i] > width_max:
            width_max = dims_a[i]

    cdef Py_ssize_t d_x = dims_a[dims_a.shape[0] - 1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] X = np.empty((n, d_x), dtype=np.float64)

    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf_in = np.empty(width_max, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf_out = np.empty(width_max, dtype=np.float64)

    cdef Py_ssize_t s, l, o, k, d_in, d_out, w_off, b_off
    cdef double acc
    cdef int code

    with nogil:
        for s in range(n):
            d_in = dims_a[0]
            for k in range(d_in):
                buf_in[k] = Za[s, k]
            w_off = 0
            b_off = 0
            for l in range(n_layers):
                d_in = dims_a[l]
                d_out = dims_a[l + 1]
                code = codes_a[l]
                for o in range(d_out):
                    acc = b_a[b_off + o]
                    for k in range(d_in):
                        acc += w_a[w_off + o * d_in + k] * buf_in[k]
                    buf_out[o] = _act(acc, code)
                for o in range(d_out):
                    buf_in[o] = buf_out[o]
                w_off += d_in * d_out
                b_off += d_out
            for o in range(d_x):
                X[s, o] = buf_in[o]
    return X


def mlp_forward_jacobian(Z, packed):
    Z = np.ascontiguousarray(Z, dtype=np.float64)
    dims, w_flat, b_flat, codes = packed
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Za = Z
    cdef cnp.ndarray[cnp.int64_t, ndim=1] dims_a = dims
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w_a = w_flat
    cdef cnp.ndarray[cnp.float64_t, ndim=1] b_a = b_flat
    cdef cnp.ndarray[cnp.int32_t, ndim=1] codes_a = codes

    cdef Py_ssize_t n = Za.shape[0]
    cdef Py_ssize_t d_z = Za.shape[1]
    cdef Py_ssize_t n_layers = codes_a.shape[0]
    cdef Py_ssize_t width_max = 0
    cdef Py_ssize_t i
    for i in range(dims_a.shape[0]):
        if dims_a[i] > width_max:
            width_max = dims_a[i]

    cdef Py_ssize_t d_x = dims_a[dims_a.shape[0] - 1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] X = np.empty((n, d_x), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=3] J = np.empty((n, d_x, d_z), dtype=np.float64)

    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf_in = np.empty(width_max, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf_out = np.empty(width_max, dtype=np.float64)
    # running Jacobian buffers, transposed layout (d_z, width) so the
    # contraction over the layer input index is contiguous
    cdef cnp.ndarray[cnp.float64_t, ndim=2] M_in = np.empty((d_z, width_max), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] M_out = np.empty((d_z, width_max), dtype=np.float64)

    cdef Py_ssize_t s, l, o, k, j, d_in, d_out, w_off, b_off, row
    cdef double acc, pre, post, dpost
    cdef int code

    with nogil:
        for s in range(n):
            d_in = dims_a[0]
            for k in range(d_in):
                buf_in[k] = Za[s, k]
                for j in range(d_z):
                    M_in[j, k] = 1.0 if k == j else 0.0
            w_off = 0
            b_off = 0
            for l in range(n_layers):
                d_in = dims_a[l]
                d_out = dims_a[l + 1]
                code = codes_a[l]
                for o in range(d_out):
                    row = w_off + o * d_in
                    pre = b_a[b_off + o]
                    for k in range(d_in):
                        pre += w_a[row + k] * buf_in[k]
                    post = _act(pre, code)
                    buf_out[o] = post
                    dpost = _act_deriv(pre, post, code)
                    for j in range(d_z):
                        acc = 0.0
                        for k in range(d_in):
                            acc += w_a[row + k] * M_in[j, k]
                        M_out[j, o] = acc * dpost
                for o in range(d_out):
                    buf_in[o] = buf_out[o]
                for j in range(d_z):
                    for o in range(d_out):
                        M_in[j, o] = M_out[j, o]
                w_off += d_in * d_out
                b_off += d_out
            for o in range(d_x):
                X[s, o] = buf_in[o]
                for j in range(d_z):
                    J[s, o, j] = M_in[j, o]
    return X, J
