import numpy as np

# interior odd 1-form stencil of corner a in face (a, b, c), edge m_ab -> m_ca
ODD_ONE_FORM = {
    'parallel': 3.0 / 16.0,    # b -> c
    'side': -3.0 / 32.0,       # a -> b and c -> a
    'spoke': 3.0 / 32.0,       # p -> a and a -> r
    'outer': 1.0 / 32.0        # p -> b and c -> r
}
# 1-form stencils next to the boundary before their closed circulations are added
BOUNDARY_ONE_FORM = {
    'spoke': 3.0 / 8.0,        # even edge, own spoke
    'neighbor': 1.0 / 8.0,     # even edge, adjacent spokes
    'opposite': -1.0 / 8.0,    # even edge, the two boundary spokes
    'parallel': 3.0 / 8.0,     # odd edge with one boundary side
    'apex': 1.0 / 8.0,         # odd edge with one boundary side, spoke to the far apex
    'corner': 0.5              # odd edge of a corner with both sides on the boundary
}
# half-box weight of each edge neighbour of the parent face for the center child
HALFBOX_CENTER = 1.0 / 16.0
# free parameter of the valence-4 even edge stencil (weight of the two side spokes)
Z_VALENCE4 = 1.0 / 32.0


def loop_alpha(d):
    return 3.0 / 16.0 if d == 3 else 3.0 / (8.0 * d)

def halfbox_beta(d):

    if d == 3:
        return 1.0 / 12.0
    if d == 4:
        return 1.0 / 8.0
    if d == 5:
        return 0.25 - np.sin(2 * np.pi / 5) ** 2 / 16.0
    return 0.25

def halfbox_deltas(d):
    """Weights of the half-box corner child on the parent, its two ring neighbours and the faces two steps away."""

    beta = halfbox_beta(d)
    delta1 = 0.75 - beta
    delta2 = 0.125 - beta / 2 if d == 3 else 0.125
    delta3 = beta if d <= 4 else beta / 2
    return delta1, delta2, delta3

def halfbox_corner(d):
    """Integrated face weights of the corner child at a valence-``d`` vertex.

    ``c[k]`` multiplies ring face ``f_k`` with the parent at ``k = 0``. Ring
    offsets that coincide on small valences receive their weight once.
    """

    delta1, delta2, delta3 = halfbox_deltas(d)
    c = np.zeros(d)
    c[0] += delta1 / 4
    c[1 % d] += delta2 / 4
    c[(d - 1) % d] += delta2 / 4
    for k in set([2 % d, (d - 2) % d]):
        c[k] += delta3 / 4
    return c

def one_form_eta(d):
    """Spoke coefficients of the interior even 1-form stencil, ``eta[k]`` on ``v -> w_k``."""

    alpha, beta = loop_alpha(d), halfbox_beta(d)
    eta = -alpha * np.ones(d)
    eta[0] = 0.375 - alpha - beta / 4
    eta[1] = eta[d - 1] = 0.125 - alpha + (beta / 8 if d == 3 else 0.0)
    if d >= 4:
        eta[2] = eta[d - 2] = (beta / 4 if d == 4 else beta / 8) - alpha
    return eta

def one_form_theta(d):
    """Rim coefficients, ``theta[k]`` on ``w_k -> w_{k+1}``."""

    beta = halfbox_beta(d)
    theta = np.zeros(d)
    theta[0], theta[d - 1] = -beta / 8, beta / 8
    if d > 3:
        theta[1], theta[d - 2] = -beta / 8, beta / 8
    return theta
