import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from halfedge import d0_gamma, curl_gamma, to_gamma
from utils.exceptions import EmptyConstraints, SolverFailure, ParseError, DimensionMismatch


def read_constraints(path, mesh=None):
    """Constraint file: one ``face x y z`` record per line, ``#`` comments allowed."""
    
    constraints = {}
    with open(path) as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if len(tokens) != 4:
                raise ParseError(path, line_no, 'expected "face x y z", found %d fields' % len(tokens))
            try:
                face = int(tokens[0])
                vec = np.array([float(t) for t in tokens[1:]])
            except ValueError as err:
                raise ParseError(path, line_no, str(err))
            if mesh is not None and not 0 <= face < mesh.num_faces:
                raise ParseError(path, line_no, 'face %d out of range' % face)
            constraints[face] = vec
    return constraints

def constraints_to_gamma(mesh, constraints):
    """Packed values of the constrained faces after tangent projection. Returns ``(faces, values, residual)``."""
    
    faces = np.array(sorted(constraints), dtype=int)
    if faces.size and (faces.min() < 0 or faces.max() >= mesh.num_faces):
        raise DimensionMismatch('Constraint faces must lie in [0, %d)' % mesh.num_faces)
    vectors = np.zeros((mesh.num_faces, 3))
    vectors[faces] = np.array([constraints[f] for f in faces]).reshape(-1, 3)
    gamma, _ = to_gamma(mesh, vectors)
    
    normal = np.abs((vectors[faces] * mesh.face_normals[faces]).sum(axis=1))
    scale = np.maximum(np.linalg.norm(vectors[faces], axis=1), np.finfo(float).tiny)
    residual = float((normal / scale).max()) if faces.size else 0.0
    return faces, gamma.reshape(-1, 2)[faces].ravel(), residual

def sem_energy(ctx, gamma):
    """SEM Hodge energy ``(G gamma)^T N^-1 (G gamma)`` with ``G = [D_Gamma; C_Gamma]``."""
    
    M = ctx.masses
    div = d0_gamma(ctx.coarse).matrix.T @ (M['Gamma'] @ gamma)
    curl = curl_gamma(ctx.coarse).matrix @ gamma
    p = spla.spsolve(sp.csc_matrix(M['V']), div)
    q = spla.spsolve(sp.csc_matrix(M['E']), curl)
    return float(div @ p + curl @ q)

def design_field(ctx, constraints):
    """Smoothest field under hard face constraints, minimizing the SEM Hodge energy.

    Unknowns are the packed values of the free faces; constrained faces keep
    the tangent projection of their vector. Returns ``(gamma, fine gamma, report)``.
    """
    
    if not constraints:
        raise EmptyConstraints('Field design needs at least one constrained face')
    mesh = ctx.coarse
    faces, values, residual = constraints_to_gamma(mesh, constraints)
    
    fixed = np.zeros(2 * mesh.num_faces, dtype=bool)
    fixed[2 * faces] = True
    fixed[2 * faces + 1] = True
    gamma = np.zeros(2 * mesh.num_faces)
    gamma[fixed] = values
    
    free = np.flatnonzero(~fixed)
    if free.size:
        M = ctx.masses
        G = sp.vstack([d0_gamma(mesh).matrix.T @ M['Gamma'], curl_gamma(mesh).matrix]).tocsc()
        N = sp.block_diag([M['V'], M['E']])
        G_f, G_c = G[:, free], G[:, np.flatnonzero(fixed)]
        K = sp.bmat([[N, -G_f], [-G_f.T, None]], format='csc')
        rhs = np.concatenate([G_c @ values, np.zeros(free.size)])
        try:
            sol = spla.splu(K).solve(rhs)
        except RuntimeError as err:
            raise SolverFailure('Field design system is singular: %s' % err)
        gamma[free] = sol[G.shape[0]:]
    
    report = {
        'constrained_faces': int(faces.size),
        'projection_residual': residual,
        'energy': sem_energy(ctx, gamma)
    }
    return gamma, ctx.subdivide(gamma), report
