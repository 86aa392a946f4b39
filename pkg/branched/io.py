import numpy as np
from utils.exceptions import ParseError, DimensionMismatch
from .field import DirectionalField


def __records__(path, tag):
    
    with open(path) as fh:
        lines = [(i, line.split()) for i, line in enumerate(fh, 1)]
    lines = [(i, tok) for i, tok in lines if tok and not tok[0].startswith('#')]
    if not lines or lines[0][1][0] != tag:
        raise ParseError(path, lines[0][0] if lines else 1, 'expected a "%s" header' % tag)
    return lines

def read_dirfield(path, mesh):
    """``DIRFIELD N |F|`` header, then one line of N xyz triples per face."""
    
    lines = __records__(path, 'DIRFIELD')
    line_no, header = lines[0]
    if len(header) != 3:
        raise ParseError(path, line_no, 'expected "DIRFIELD N |F|"')
    try:
        N, count = int(header[1]), int(header[2])
    except ValueError as err:
        raise ParseError(path, line_no, str(err))
    if count != mesh.num_faces:
        raise DimensionMismatch('%s holds %d faces, mesh has %d' % (path, count, mesh.num_faces))
    if len(lines) - 1 != count:
        raise ParseError(path, line_no, 'expected %d face records, found %d' % (count, len(lines) - 1))
    
    vectors = np.zeros((count, N, 3))
    for f, (line_no, tok) in enumerate(lines[1:]):
        if len(tok) != 3 * N:
            raise ParseError(path, line_no, 'expected %d values, found %d' % (3 * N, len(tok)))
        try:
            vectors[f] = np.array([float(t) for t in tok]).reshape(N, 3)
        except ValueError as err:
            raise ParseError(path, line_no, str(err))
    return vectors

def write_dirfield(path, field):
    
    F, N = field.vectors.shape[:2]
    with open(path, 'w') as fh:
        fh.write('DIRFIELD %d %d\n' % (N, F))
        for row in field.vectors.reshape(F, 3 * N):
            fh.write(' '.join('%.17g' % x for x in row) + '\n')

def read_matching(path, mesh):
    """``MATCHING |E|`` header, then one integer per edge in canonical order, ``*`` on boundary edges."""
    
    lines = __records__(path, 'MATCHING')
    line_no, header = lines[0]
    try:
        count = int(header[1])
    except (IndexError, ValueError):
        raise ParseError(path, line_no, 'expected "MATCHING |E|"')
    if count != mesh.num_edges:
        raise DimensionMismatch('%s holds %d edges, mesh has %d' % (path, count, mesh.num_edges))
    if len(lines) - 1 != count:
        raise ParseError(path, line_no, 'expected %d edge records, found %d' % (count, len(lines) - 1))
    
    matching = np.zeros(count, dtype=np.int64)
    for e, (line_no, tok) in enumerate(lines[1:]):
        if tok[0] == '*':
            if not mesh.boundary_edges[e]:
                raise ParseError(path, line_no, 'edge %d is interior but marked "*"' % e)
            continue
        try:
            matching[e] = int(tok[0])
        except ValueError as err:
            raise ParseError(path, line_no, str(err))
    return matching

def write_matching(path, mesh, matching):
    
    with open(path, 'w') as fh:
        fh.write('MATCHING %d\n' % mesh.num_edges)
        for e in range(mesh.num_edges):
            fh.write('*\n' if mesh.boundary_edges[e] else '%d\n' % matching[e])

def load_directional_field(mesh, dirfield_path, matching_path=None):
    
    vectors = read_dirfield(dirfield_path, mesh)
    matching = read_matching(matching_path, mesh) if matching_path else None
    return DirectionalField(mesh, vectors, matching)
