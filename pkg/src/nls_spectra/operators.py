"""Banded and block-banded matrix containers.

``BandedOperator`` stores a matrix in LAPACK-style band storage
``band[ku + i - j, j] = A[i, j]`` and knows how to hand itself to the
LU kernels, the symmetric banded eigensolver, and scipy.sparse for
products.  ``BlockOperator`` is a small grid of banded blocks that can
be applied block-wise or flattened to a single interleaved banded
matrix (unknowns of all blocks at one grid point adjacent), which keeps
the bandwidth proportional to the block count and makes shift-invert
LU cheap.
"""

import numpy as np
import scipy.sparse as sp


class BandedOperator:
    def __init__(self, band, kl, ku, symmetry_tag="nonsymmetric", weight=None):
        band = np.ascontiguousarray(band)
        if band.shape[0] != kl + ku + 1:
            raise ValueError("band storage must have kl + ku + 1 rows")
        band.setflags(write=False)
        self.band = band
        self.kl = int(kl)
        self.ku = int(ku)
        self.symmetry_tag = symmetry_tag
        self.weight = weight  # similarity diag d with A_sym = D A_raw D^-1
        self._sparse = None

    # -- construction ------------------------------------------------
    @classmethod
    def from_diagonals(cls, diags, symmetry_tag="nonsymmetric", weight=None):
        """Build from {offset: values}; offset > 0 is a superdiagonal.

        Off-diagonal arrays may have length n or n - |offset|.
        """
        if 0 not in diags:
            raise ValueError("main diagonal required")
        offsets = sorted(diags)
        kl = max(0, -offsets[0])
        ku = max(0, offsets[-1])
        n = np.size(diags[0])
        dtype = np.result_type(*[np.asarray(v).dtype for v in diags.values()])
        band = np.zeros((kl + ku + 1, n), dtype=dtype)
        for o, v in diags.items():
            v = np.asarray(v)
            if v.size not in (n, n - abs(o)):
                raise ValueError(f"diagonal {o} has wrong length")
            v = v[: n - abs(o)]
            if o >= 0:
                band[ku - o, o:] = v
            else:
                band[ku - o, : n + o] = v
        return cls(band, kl, ku, symmetry_tag=symmetry_tag, weight=weight)

    @classmethod
    def from_sparse(cls, A, symmetry_tag="nonsymmetric", weight=None):
        A = A.tocoo()
        mask = A.data != 0
        rows, cols, data = A.row[mask], A.col[mask], A.data[mask]
        kl = int(max(0, (rows - cols).max(initial=0)))
        ku = int(max(0, (cols - rows).max(initial=0)))
        band = np.zeros((kl + ku + 1, A.shape[1]), dtype=A.dtype)
        band[ku + rows - cols, cols] = data
        return cls(band, kl, ku, symmetry_tag=symmetry_tag, weight=weight)

    @classmethod
    def identity(cls, n, dtype=float):
        return cls.from_diagonals({0: np.ones(n, dtype=dtype)},
                                  symmetry_tag="symmetric")

    # -- basic queries -----------------------------------------------
    @property
    def size(self):
        return self.band.shape[1]

    @property
    def dtype(self):
        return self.band.dtype

    def diagonal(self, offset=0):
        n = self.size
        if offset > self.ku or -offset > self.kl:
            return np.zeros(n - abs(offset), dtype=self.dtype)
        if offset >= 0:
            return self.band[self.ku - offset, offset:]
        return self.band[self.ku - offset, : n + offset]

    def to_sparse(self):
        if self._sparse is None:
            offsets = list(range(-self.kl, self.ku + 1))
            diags = [self.diagonal(o) for o in offsets]
            self._sparse = sp.diags(diags, offsets, format="csr",
                                    shape=(self.size, self.size))
        return self._sparse

    def toarray(self):
        return self.to_sparse().toarray()

    def matvec(self, x):
        return self.to_sparse() @ x

    def is_symmetric(self, rel_tol=1e-12):
        scale = max(np.abs(self.band).max(), 1e-300)
        for o in range(1, max(self.kl, self.ku) + 1):
            a = self.diagonal(o)
            b = self.diagonal(-o)
            if a.size != b.size or np.abs(a - b).max(initial=0) > rel_tol * scale:
                return False
        return True

    # -- algebra -----------------------------------------------------
    def transpose(self):
        diags = {-o: self.diagonal(o).copy()
                 for o in range(-self.kl, self.ku + 1)}
        return BandedOperator.from_diagonals(diags, symmetry_tag=self.symmetry_tag)

    def __matmul__(self, other):
        A = self.to_sparse() @ other.to_sparse()
        return BandedOperator.from_sparse(A)

    def __add__(self, other):
        if isinstance(other, BandedOperator):
            kl = max(self.kl, other.kl)
            ku = max(self.ku, other.ku)
            diags = {}
            for o in range(-kl, ku + 1):
                diags[o] = self.diagonal(o) + other.diagonal(o)
            tag = ("symmetric" if self.symmetry_tag == other.symmetry_tag ==
                   "symmetric" else "nonsymmetric")
            w = self.weight if self.weight is not None else other.weight
            return BandedOperator.from_diagonals(diags, symmetry_tag=tag, weight=w)
        return NotImplemented

    def __mul__(self, c):
        diags = {o: c * self.diagonal(o) for o in range(-self.kl, self.ku + 1)}
        return BandedOperator.from_diagonals(diags, symmetry_tag=self.symmetry_tag,
                                             weight=self.weight)

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + (-1.0) * other

    def add_diagonal(self, v):
        diags = {o: self.diagonal(o).copy() for o in range(-self.kl, self.ku + 1)}
        diags[0] = diags[0] + v
        return BandedOperator.from_diagonals(diags, symmetry_tag=self.symmetry_tag,
                                             weight=self.weight)

    def symmetrized(self, force=False):
        """Exact symmetrization for operators symmetric up to roundoff."""
        if self.symmetry_tag == "symmetric" and not force:
            return self
        diags = {0: self.diagonal(0).copy()}
        for o in range(1, max(self.kl, self.ku) + 1):
            avg = 0.5 * (self.diagonal(o) + self.diagonal(-o))
            diags[o] = avg
            diags[-o] = avg.copy()
        return BandedOperator.from_diagonals(diags, symmetry_tag="symmetric",
                                             weight=self.weight)

    # -- solver interfaces -------------------------------------------
    def lu_storage(self, shift=0.0):
        """Expanded (2 kl + ku + 1, n) storage of (A - shift*I) for bandlu."""
        dtype = np.result_type(self.dtype, type(shift))
        ab = np.zeros((2 * self.kl + self.ku + 1, self.size), dtype=dtype)
        ab[self.kl:, :] = self.band
        ab[self.kl + self.ku, :] -= shift
        return ab

    def upper_band(self):
        """Upper-triangle band storage for scipy.linalg.eig_banded."""
        if not self.is_symmetric(1e-10):
            raise ValueError("upper_band requires a symmetric operator")
        u = self.ku
        ab = np.zeros((u + 1, self.size), dtype=self.dtype)
        for o in range(u + 1):
            ab[u - o, o:] = self.diagonal(o)
        return ab

    def write_coordinates(self, path, header_lines=()):
        """Export as text rows 'row col real imag' for external inspection."""
        A = self.to_sparse().tocoo()
        with open(path, "w") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            for i, j, v in zip(A.row, A.col, A.data):
                c = complex(v)
                fh.write(f"{i} {j} {c.real:.17g} {c.imag:.17g}\n")


def symmetrize_tridiagonal(op):
    """Similarity transform D A D^-1 making a tridiagonal operator symmetric.

    Requires sub[i] * sup[i] > 0 along the whole band (true for the
    radial Laplacians assembled here).  Returns a symmetric
    BandedOperator carrying the diagonal weight d, with eigenvectors
    related by v_sym = d * v_raw.
    """
    if op.kl != 1 or op.ku != 1:
        raise ValueError("symmetrize_tridiagonal expects a tridiagonal operator")
    sub = op.diagonal(-1)
    sup = op.diagonal(1)
    prod = sub * sup
    if np.any(prod <= 0):
        raise ValueError("band product changes sign; similarity undefined")
    n = op.size
    d = np.empty(n)
    d[0] = 1.0
    ratio = np.sqrt(sup / sub)
    d[1:] = np.cumprod(ratio)
    off = np.sign(sub) * np.sqrt(prod)
    return BandedOperator.from_diagonals(
        {-1: off, 0: op.diagonal(0).copy(), 1: off.copy()},
        symmetry_tag="symmetric", weight=d)


class BlockOperator:
    """Square grid of equally sized banded blocks (None = zero block)."""

    def __init__(self, blocks):
        self.nb = len(blocks)
        self.blocks = blocks
        sizes = {b.size for row in blocks for b in row if b is not None}
        if len(sizes) != 1:
            raise ValueError("all blocks must share one size")
        self.block_size = sizes.pop()
        self._sparse = None

    @property
    def size(self):
        return self.nb * self.block_size

    def block(self, i, j):
        return self.blocks[i][j]

    def to_sparse(self):
        """Block-stacked sparse form: component b spans rows [b*N, (b+1)*N)."""
        if self._sparse is None:
            grid = [[None if b is None else b.to_sparse() for b in row]
                    for row in self.blocks]
            self._sparse = sp.bmat(grid, format="csr")
        return self._sparse

    def matvec(self, x):
        return self.to_sparse() @ x

    def interleaved(self):
        """Flatten to one BandedOperator with point-major unknown ordering.

        Unknown (block b, grid point i) maps to index i*nb + b, so a
        grid of tridiagonal blocks yields global bandwidth
        nb + (nb - 1) instead of ~nb*N.
        """
        B = self.nb
        N = self.block_size
        kl_b = max((b.kl for row in self.blocks for b in row if b is not None),
                   default=0)
        ku_b = max((b.ku for row in self.blocks for b in row if b is not None),
                   default=0)
        KL = B * kl_b + B - 1
        KU = B * ku_b + B - 1
        dtype = np.result_type(*[b.dtype for row in self.blocks
                                 for b in row if b is not None])
        band = np.zeros((KL + KU + 1, B * N), dtype=dtype)
        for b1, row in enumerate(self.blocks):
            for b2, blk in enumerate(row):
                if blk is None:
                    continue
                for t in range(-blk.kl, blk.ku + 1):
                    vals = blk.diagonal(t)
                    goff = B * t + (b2 - b1)
                    # columns of this diagonal: j = max(0, t) .. ; global
                    # column index B*j + b2
                    j0 = max(0, t)
                    cols = slice(B * j0 + b2, B * (j0 + vals.size - 1) + b2 + 1, B)
                    band[KU - goff, cols] = vals
        return BandedOperator(band, KL, KU)

    def interleave_vector(self, x_blocks):
        """Reorder a block-stacked vector into interleaved ordering."""
        B, N = self.nb, self.block_size
        return np.asarray(x_blocks).reshape(B, N).T.reshape(-1)

    def deinterleave_vector(self, x_inter):
        B, N = self.nb, self.block_size
        return np.asarray(x_inter).reshape(N, B).T.reshape(-1)

    def write_coordinates(self, path, header_lines=()):
        A = self.to_sparse().tocoo()
        with open(path, "w") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            for i, j, v in zip(A.row, A.col, A.data):
                c = complex(v)
                fh.write(f"{i} {j} {c.real:.17g} {c.imag:.17g}\n")
