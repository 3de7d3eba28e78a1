"""Batched exp/log/distance kernels for the three simply connected model spaces.

Points live in ambient coordinates: R^2 for the plane, unit vectors in R^3 for
the sphere and the upper sheet of the hyperboloid -t^2 + x^2 + y^2 = -1 for the
hyperbolic plane.  Every function broadcasts over leading axes.
"""

import numpy as np

_TINY = 1e-300


class Flat:
    name = "flat"
    dim = 2

    @staticmethod
    def inner(u, v):
        return np.sum(u * v, axis=-1)

    @staticmethod
    def norm(v):
        return np.sqrt(np.sum(v * v, axis=-1))

    @staticmethod
    def dist(x, y):
        d = x - y
        return np.sqrt(np.sum(d * d, axis=-1))

    @staticmethod
    def log(x, y):
        return y - x

    @staticmethod
    def exp(x, v):
        return x + v

    @staticmethod
    def retract(x):
        return x

    @staticmethod
    def centroid(points):
        return points.mean(axis=-2)

    @staticmethod
    def tangent_basis(x):
        return np.broadcast_to(np.eye(2), x.shape[:-1] + (2, 2))

    @staticmethod
    def jacobi(d):
        """Transverse second variation of geodesic length: (own, cross) coefficients."""
        inv = 1.0 / np.maximum(d, 1e-14)
        return inv, inv


class Sphere:
    name = "sphere"
    dim = 3

    @staticmethod
    def inner(u, v):
        return np.sum(u * v, axis=-1)

    @staticmethod
    def norm(v):
        return np.sqrt(np.sum(v * v, axis=-1))

    @staticmethod
    def dist(x, y):
        # atan2 form keeps full relative accuracy for tiny and near-antipodal angles
        c = np.sum(x * y, axis=-1)
        s = np.linalg.norm(np.cross(x, y), axis=-1)
        return np.arctan2(s, c)

    @classmethod
    def log(cls, x, y):
        c = np.sum(x * y, axis=-1, keepdims=True)
        w = y - c * x
        nw = np.sqrt(np.sum(w * w, axis=-1, keepdims=True))
        theta = np.arctan2(nw, c)
        return np.where(nw > _TINY, theta / np.maximum(nw, _TINY), 1.0) * w

    @staticmethod
    def exp(x, v):
        nv = np.sqrt(np.sum(v * v, axis=-1, keepdims=True))
        safe = np.maximum(nv, _TINY)
        out = np.cos(nv) * x + np.where(nv > _TINY, np.sin(nv) / safe, 1.0) * v
        return out / np.linalg.norm(out, axis=-1, keepdims=True)

    @staticmethod
    def retract(x):
        return x / np.linalg.norm(x, axis=-1, keepdims=True)

    @staticmethod
    def centroid(points):
        m = points.sum(axis=-2)
        nm = np.linalg.norm(m, axis=-1, keepdims=True)
        # fall back to the first point when the terminals balance out
        return np.where(nm > 1e-9, m / np.maximum(nm, _TINY), points[..., 0, :])

    @staticmethod
    def tangent_basis(x):
        """Orthonormal tangent frame at x, shape (..., 2, 3)."""
        axis = np.argmin(np.abs(x), axis=-1)
        e = np.zeros_like(x)
        np.put_along_axis(e, axis[..., None], 1.0, axis=-1)
        u = e - np.sum(e * x, axis=-1, keepdims=True) * x
        u /= np.linalg.norm(u, axis=-1, keepdims=True)
        return np.stack([u, np.cross(x, u)], axis=-2)

    @staticmethod
    def jacobi(d):
        s = np.maximum(np.sin(d), 1e-14)
        return np.cos(d) / s, 1.0 / s


class Hyperboloid:
    name = "hyperboloid"
    dim = 3

    @staticmethod
    def inner(u, v):
        return -u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] + u[..., 2] * v[..., 2]

    @classmethod
    def norm(cls, v):
        return np.sqrt(np.maximum(cls.inner(v, v), 0.0))

    @classmethod
    def dist(cls, x, y):
        # chord form 2 asinh(|x-y|_L / 2) is accurate at short range
        d = x - y
        chord = np.sqrt(np.maximum(cls.inner(d, d), 0.0))
        return 2.0 * np.arcsinh(0.5 * chord)

    @classmethod
    def log(cls, x, y):
        c = -cls.inner(x, y)[..., None]
        w = y - c * x
        nw = cls.norm(w)[..., None]
        dist = cls.dist(x, y)[..., None]
        return np.where(nw > _TINY, dist / np.maximum(nw, _TINY), 1.0) * w

    @classmethod
    def exp(cls, x, v):
        nv = cls.norm(v)[..., None]
        safe = np.maximum(nv, _TINY)
        out = np.cosh(nv) * x + np.where(nv > _TINY, np.sinh(nv) / safe, 1.0) * v
        return cls.retract(out)

    @staticmethod
    def retract(x):
        spatial = x[..., 1:]
        t = np.sqrt(1.0 + np.sum(spatial * spatial, axis=-1, keepdims=True))
        return np.concatenate([t, spatial], axis=-1)

    @classmethod
    def centroid(cls, points):
        m = points.sum(axis=-2)
        scale = np.sqrt(np.maximum(-cls.inner(m, m), _TINY))[..., None]
        return cls.retract(m / scale)

    @classmethod
    def tangent_basis(cls, x):
        """Lorentz-orthonormal tangent frame at x, shape (..., 2, 3)."""
        e1 = np.zeros_like(x)
        e1[..., 1] = 1.0
        e2 = np.zeros_like(x)
        e2[..., 2] = 1.0
        u = e1 + cls.inner(e1, x)[..., None] * x
        u /= cls.norm(u)[..., None]
        v = e2 + cls.inner(e2, x)[..., None] * x
        v -= cls.inner(v, u)[..., None] * u
        v /= cls.norm(v)[..., None]
        return np.stack([u, v], axis=-2)

    @staticmethod
    def jacobi(d):
        s = np.maximum(np.sinh(d), 1e-14)
        return np.cosh(d) / s, 1.0 / s


def disk_to_hyperboloid(p):
    p = np.asarray(p, dtype=float)
    r2 = np.sum(p * p, axis=-1, keepdims=True)
    return np.concatenate([1.0 + r2, 2.0 * p], axis=-1) / (1.0 - r2)


def hyperboloid_to_disk(x):
    x = np.asarray(x, dtype=float)
    return x[..., 1:] / (1.0 + x[..., :1])
