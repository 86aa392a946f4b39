import numpy as np
from .closed_forms import (
    HALFBOX_CENTER,
    Z_VALENCE4,
    loop_alpha,
    halfbox_beta,
    halfbox_deltas,
    halfbox_corner,
    one_form_eta,
    one_form_theta
)
from .constraints import solve_stencil_constraints, even_edge_stencil, odd_unknown, boundary_unknown
from .local import TIE_BREAKS

# valences whose tie-breaks pin the shared odd coefficients
PINNING_VALENCES = (4, 6)


class StencilSet:
    """Stencil coefficients of the stationary subdivision scheme.

    Loop, half-box and 1-form coefficients are closed forms. The unsigned
    edge stencils and all boundary stencils are solved once from the
    coefficient constraint systems and cached; a mesh with a larger valence
    than ``max_valence`` extends the solve on demand. ``tables``,
    ``residuals`` and ``spectra`` hold the per-patch audit filled by
    ``derive_constrained_stencils``.
    """

    def __init__(self, max_valence=12, tie_break='positivity', z=Z_VALENCE4, tol=1e-12):

        if tie_break not in TIE_BREAKS:
            raise ValueError('Only %s tie-breaks are supported.' % ', '.join(TIE_BREAKS))

        self.max_valence = max_valence
        self.tie_break = tie_break
        self.z = z
        self.tol = tol
        self.solution = None
        self.system_residuals = {}
        self.tables = {}
        self.residuals = {}
        self.spectra = {}

    @classmethod
    def from_config(cls, cfg):
        return cls(
            max_valence=cfg.SUBDIVISION.MAX_VALENCE,
            tie_break=cfg.SUBDIVISION.TIE_BREAK,
            z=cfg.SUBDIVISION.VALENCE4_Z,
            tol=cfg.SUBDIVISION.RESIDUAL_TOL
        )

    @property
    def valences(self):
        return range(3, max(self.max_valence, max(PINNING_VALENCES)) + 1)

    def solve(self, valence=3):
        """Solve the constraint systems up to ``valence``; raises InfeasibleConstraints or UnresolvedDOF."""

        if self.solution is not None and valence <= max(self.valences):
            return self.solution
        self.max_valence = max(self.max_valence, valence)
        self.solution, self.system_residuals = solve_stencil_constraints(self.valences, self.z, self.tie_break, self.tol)
        return self.solution

    def edge_even(self, d):
        """Interior even ``S_E*`` stencil: spoke and rim coefficients relative to the target spoke."""
        return even_edge_stencil(self.solve(d), d)

    def edge_odd(self):
        solution = self.solve()
        return {kind: solution[odd_unknown(kind)] for kind in ('parallel', 'side', 'spoke', 'outer')}

    def boundary(self, op, kind):
        return self.solve()[boundary_unknown(op, kind)]

    def closed_forms(self):

        forms = {}
        for d in self.valences:
            entry = {
                'alpha': loop_alpha(d),
                'beta': halfbox_beta(d),
                'delta': list(halfbox_deltas(d)),
                'face_corner': halfbox_corner(d).tolist(),
                'eta': one_form_eta(d).tolist(),
                'theta': one_form_theta(d).tolist()
            }
            forms[str(d)] = entry
        forms['face_center'] = HALFBOX_CENTER
        return forms

    def derived(self):

        solution = self.solve()
        out = {'S_E/interior/odd': self.edge_odd()}
        for d in self.valences:
            spoke, rim = self.edge_even(d)
            out['S_E/interior/%d/even' % d] = {'spoke': spoke.tolist(), 'rim': rim.tolist()}
        for (op, _, kind), value in sorted((k, v) for k, v in solution.items() if k[1] == 'boundary'):
            out.setdefault('%s/boundary' % op, {})[kind] = value
        return out

    def dump(self):

        tables = {}
        for (op, d, parity, boundary), entries in sorted(self.tables.items()):
            key = '%s/%s/%d/%s' % (op, 'boundary' if boundary else 'interior', d, parity)
            tables[key] = entries
        out = {
            'settings': {
                'max_valence': self.max_valence,
                'tie_break': self.tie_break,
                'z': self.z,
                'tol': self.tol
            },
            'closed_forms': self.closed_forms(),
            'derived': self.derived(),
            'system_residuals': dict(self.system_residuals),
            'tables': tables,
            'residuals': {'%s/%d' % ('boundary' if b else 'interior', d): r for (d, b), r in sorted(self.residuals.items())},
            'spectra': {'%s/%s/%d' % (op, 'boundary' if b else 'interior', d): s for (op, d, b), s in sorted(self.spectra.items())}
        }
        if ('S_E', 4, False) in self.spectra:
            out['valence4_edge_spectrum'] = sorted(np.real(self.spectra[('S_E', 4, False)]['eigenvalues']).tolist(), reverse=True)
        return out
