class HalfedgeError(ValueError):
    """Base class of every error raised by the mesh, operator, subdivision,
    SEM and branched-field code paths."""
    pass


class NonManifold(HalfedgeError):
    pass


class InconsistentOrientation(HalfedgeError):
    pass


class DegenerateFace(HalfedgeError):
    pass


class BrokenNullSum(HalfedgeError):
    pass


class BoundaryMeshUnsupported(HalfedgeError):
    pass


class DimensionMismatch(HalfedgeError):
    pass


class SolverFailure(HalfedgeError):
    pass


class EigensolverFailure(SolverFailure):
    pass


class InfeasibleConstraints(HalfedgeError):

    def __init__(self, relation, residual, tol=None):
        self.relation = relation
        self.residual = residual
        self.tol = tol
        msg = 'Constraint "%s" is infeasible: residual %.3e' % (relation, residual)
        if tol is not None:
            msg += ' > tol %.1e' % tol
        super().__init__(msg)


class UnresolvedDOF(HalfedgeError):

    def __init__(self, relation, count):
        self.relation = relation
        self.count = count
        super().__init__('Constraint "%s" leaves %d free degrees of freedom and no tie-break is set' % (relation, count))


class EmptyConstraints(HalfedgeError):
    pass


class SingularVertex(HalfedgeError):

    def __init__(self, vertex, index):
        self.vertex = vertex
        self.index = index
        super().__init__('Vertex %d is singular (index %s) and cannot be combed' % (vertex, index))


class ParseError(HalfedgeError):

    def __init__(self, path, line_no, msg):
        self.path = path
        self.line_no = line_no
        super().__init__('%s:%d: %s' % (path, line_no, msg))
