import os
import os.path as osp
import numpy as np
import scipy.sparse as sp
from utils.exceptions import DimensionMismatch


class SparseOperator:
    """CSR matrix tagged with the spaces it maps between (e.g. ``V -> E``).

    Composition checks the inner dimension and raises ``DimensionMismatch``;
    the labels travel with the result so dumps stay self-describing.
    """
    
    def __init__(self, matrix, row_space, col_space, name=''):
        
        self.matrix = sp.csr_matrix(matrix)
        self.row_space = row_space
        self.col_space = col_space
        self.name = name
    
    @property
    def shape(self):
        return self.matrix.shape
    
    @property
    def T(self):
        return SparseOperator(self.matrix.T, self.col_space, self.row_space, self.name + '^T' if self.name else '')
    
    def toarray(self):
        return self.matrix.toarray()
    
    def diagonal(self):
        return self.matrix.diagonal()
    
    def __check__(self, other_rows, what):
        if self.shape[1] != other_rows:
            raise DimensionMismatch('%s (%s -> %s, %d x %d) cannot act on %s with %d rows' % (
                self.name or 'operator', self.col_space, self.row_space, self.shape[0], self.shape[1], what, other_rows))
    
    def __matmul__(self, other):
        
        if isinstance(other, SparseOperator):
            self.__check__(other.shape[0], other.name or other.row_space)
            return SparseOperator(self.matrix @ other.matrix, self.row_space, other.col_space)
        if sp.issparse(other):
            self.__check__(other.shape[0], 'matrix')
            return SparseOperator(self.matrix @ other, self.row_space, '?')
        other = np.asarray(other)
        self.__check__(other.shape[0], 'array')
        return self.matrix @ other
    
    def __rmatmul__(self, other):
        return other @ self.matrix
    
    def __add__(self, other):
        
        mat = other.matrix if isinstance(other, SparseOperator) else other
        if mat.shape != self.shape:
            raise DimensionMismatch('Cannot add %s to %s' % (mat.shape, self.shape))
        return SparseOperator(self.matrix + mat, self.row_space, self.col_space)
    
    def __sub__(self, other):
        return self + (-1.0) * other
    
    def __mul__(self, scalar):
        return SparseOperator(scalar * self.matrix, self.row_space, self.col_space, self.name)
    
    __rmul__ = __mul__
    
    def __neg__(self):
        return (-1.0) * self
    
    def triplets(self):
        """Sorted ``(row, col, value)`` arrays of the stored nonzeros."""
        
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return coo.row[order], coo.col[order], coo.data[order]
    
    def save(self, path):
        
        if osp.dirname(path) and not osp.exists(osp.dirname(path)):
            os.makedirs(osp.dirname(path))
        rows, cols, vals = self.triplets()
        with open(path, 'w') as f:
            f.write('# %s %d %d %s %s\n' % (self.name or 'operator', self.shape[0], self.shape[1], self.row_space, self.col_space))
            for r, c, v in zip(rows, cols, vals):
                f.write('%d %d %.17g\n' % (r, c, v))
        return path
    
    def __repr__(self):
        return 'SparseOperator(%s: %s -> %s, shape=%s, nnz=%d)' % (
            self.name, self.col_space, self.row_space, self.shape, self.matrix.nnz)


def diagonal(values, space, name=''):
    return SparseOperator(sp.diags(np.asarray(values, dtype=float)), space, space, name)

def as_matrix(op):
    return op.matrix if isinstance(op, SparseOperator) else op
