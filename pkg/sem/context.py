import scipy.sparse as sp
import scipy.sparse.linalg as spla
from operators import SparseOperator, mass_vertex, mass_edge
from halfedge import d0_gamma, curl_gamma, mass_gamma
from subdivision import StencilSet, build_hierarchy, aggregate, pointwise_edge_prolongation
from utils.exceptions import SolverFailure


class SemContext:
    """Coarse mesh, subdivision hierarchy to level ``l`` and the aggregated operators.

    ``sets`` is the list of per-level subdivision sets starting at the coarse
    mesh; an empty list is the plain finite element setting on ``mesh``.
    """
    
    def __init__(self, mesh, sets):
        
        self.coarse = mesh
        self.sets = list(sets)
        self.level = len(self.sets)
        self.fine = self.sets[-1].fine if self.sets else mesh
        
        if self.sets:
            self.S_V = aggregate(self.sets, 'S_V')
            self.S_gamma = aggregate(self.sets, 'S_gamma')
            self.S_E = aggregate(self.sets, 'S_E')
            T = None
            for s in self.sets:
                step = pointwise_edge_prolongation(s.S_E, mass_edge(s.coarse).diagonal(), mass_edge(s.fine).diagonal())
                T = step if T is None else step @ T
            self.T_E = T.tocsr()
        else:
            self.S_V = sp.identity(mesh.num_vertices, format='csr')
            self.S_gamma = sp.identity(2 * mesh.num_faces, format='csr')
            self.S_E = sp.identity(mesh.num_edges, format='csr')
            self.T_E = sp.identity(mesh.num_edges, format='csr')
        
        self.__masses = None
    
    @classmethod
    def from_mesh(cls, mesh, level, stencils=None, geometry='loop', progress=False):
        
        stencils = stencils or StencilSet()
        return cls(mesh, build_hierarchy(mesh, level, stencils, geometry, progress))
    
    @classmethod
    def from_config(cls, cfg, mesh, progress=True):
        return cls.from_mesh(mesh, cfg.SUBDIVISION.LEVEL, StencilSet.from_config(cfg), cfg.SUBDIVISION.GEOMETRY, progress)
    
    def sub_context(self, k):
        """Context whose coarse mesh is level ``k`` of this hierarchy (same fine mesh)."""
        
        if k == 0:
            return self
        if k == self.level:
            return SemContext(self.fine, [])
        return SemContext(self.sets[k].coarse, self.sets[k:])
    
    def fem_context(self):
        """Plain finite elements on the coarse mesh."""
        return SemContext(self.coarse, [])
    
    @property
    def masses(self):
        if self.__masses is None:
            self.__masses = restrict_mass(self)
        return self.__masses
    
    def subdivide(self, gamma):
        return self.S_gamma @ gamma


def restrict_mass(ctx, space=None):
    """Fine mass matrices pulled back through the aggregated subdivision, ``S^T M S``.

    Without ``space`` all three are returned in a dict keyed by space label;
    the edge mass uses the pointwise edge prolongation.
    """
    
    if space is not None:
        if space not in ('Gamma', 'V', 'E'):
            raise ValueError('Only Gamma, V and E restricted masses exist.')
        return SparseOperator(ctx.masses[space], space + '*', space, 'M0_' + space)
    fine = ctx.fine
    M_gamma = mass_gamma(fine).matrix
    M_V = mass_vertex(fine).matrix
    M_E = mass_edge(fine).matrix
    return {
        'Gamma': (ctx.S_gamma.T @ M_gamma @ ctx.S_gamma).tocsr(),
        'V': (ctx.S_V.T @ M_V @ ctx.S_V).tocsr(),
        'E': (ctx.T_E.T @ M_E @ ctx.T_E).tocsr()
    }

def __factorized__(M, what):
    
    try:
        return spla.factorized(sp.csc_matrix(M))
    except RuntimeError as err:
        raise SolverFailure('Restricted %s mass is singular: %s' % (what, err))

def sem_operators(ctx):
    """SEM divergence, curl and Laplacians on the coarse mesh.

    Inverse masses are applied through sparse factorizations; the Laplacians
    that involve them are returned as ``LinearOperator``s.
    """
    
    M = ctx.masses
    D0 = d0_gamma(ctx.coarse).matrix
    C = curl_gamma(ctx.coarse).matrix
    D = (D0.T @ M['Gamma']).tocsr()
    L_V = (D @ D0).tocsr()
    
    solve_gamma = __factorized__(M['Gamma'], 'Gamma')
    solve_V = __factorized__(M['V'], 'vertex')
    solve_E = __factorized__(M['E'], 'edge')
    
    ne, ng = C.shape
    L_E = spla.LinearOperator((ne, ne), matvec=lambda psi: C @ solve_gamma(C.T @ psi), dtype=float)
    L_gamma = spla.LinearOperator(
        (ng, ng),
        matvec=lambda x: D0 @ solve_V(D @ x) + solve_gamma(C.T @ solve_E(C @ x)),
        dtype=float
    )
    return {
        'd0_gamma': D0,
        'D_gamma': D,
        'C_gamma': C,
        'L_V': L_V,
        'L_E': L_E,
        'L_gamma': L_gamma,
        'M_gamma': M['Gamma'],
        'M_V': M['V'],
        'M_E': M['E']
    }
