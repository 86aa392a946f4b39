import os
import pprint
import shutil
import numpy as np
import os.path as osp
from mesh import load_mesh, save_obj
from subdivision import StencilSet
from halfedge import read_gamma, write_gamma, read_mean_curl, write_mean_curl, from_mean_curl, to_mean_curl, null_sum_residual
from branched import load_directional_field, branched_subdivide, write_dirfield, write_matching
from sem import SemContext, design_field, read_constraints, sample_field
from utils import write_report, print_table, DimensionMismatch

# residuals gated by the exit code
GATED = ['exactness', 'closedness', 'null_sum', 'curl', 'gamma_exactness', 'boundary_curl']


class SubdivideRunner:
    
    def __init__(
        self,
        cfg
    ):
        
        self.cfg = cfg
        self.level = cfg.SUBDIVISION.LEVEL
        self.tol = cfg.TOL
        self.save_dir = osp.join(cfg.OUTPUT_DIR, cfg.RUN_NAME)
        if not osp.exists(self.save_dir):
            os.makedirs(self.save_dir)
        
        self.mesh = load_mesh(cfg.MESH.PATH, cfg.OPERATORS.DEGENERATE_AREA)
        print('Loaded mesh %s: %s' % (cfg.MESH.PATH, self.mesh))
        self.stencils = StencilSet.from_config(cfg)
        self.passed = False
    
    def __copy_inputs__(self):
        
        outputs = {}
        for key, name in [('FIELD', 'field_l0' + osp.splitext(self.cfg.MESH.FIELD)[1]), ('DIRFIELD', 'dirfield_l0.txt'), ('MATCHING', 'matching_l0.txt')]:
            src = getattr(self.cfg.MESH, key)
            if src:
                outputs[key.lower()] = shutil.copyfile(src, osp.join(self.save_dir, name))
        return outputs
    
    def run(self):
        
        report = {'command': 'subdivide', 'mesh': self.cfg.MESH.PATH, 'level': self.level, 'tol': self.tol, 'levels': []}
        
        if self.level == 0:
            print('Level 0: copying the inputs unchanged')
            report['outputs'] = self.__copy_inputs__()
            report['outputs']['mesh'] = save_obj(osp.join(self.save_dir, 'mesh_l0.obj'), self.mesh)
            report['residuals'] = {key: 0.0 for key in GATED}
            self.passed = True
            return self.__finish__(report)
        
        ctx = SemContext.from_config(self.cfg, self.mesh)
        for k, s in enumerate(ctx.sets):
            level = dict(s.report)
            level['level'] = k + 1
            level['vertices'] = s.fine.num_vertices
            level['faces'] = s.fine.num_faces
            report['levels'].append(level)
        print_table(report['levels'], ['level', 'faces'] + GATED)
        report['residuals'] = {key: max(l[key] for l in report['levels']) for key in GATED}
        
        outputs = {'mesh': save_obj(osp.join(self.save_dir, 'mesh_l%d.obj' % self.level), ctx.fine)}
        if self.cfg.MESH.DIRFIELD:
            field = load_directional_field(self.mesh, self.cfg.MESH.DIRFIELD, self.cfg.MESH.MATCHING or None)
            if self.cfg.BRANCHED.N and field.N != self.cfg.BRANCHED.N:
                raise DimensionMismatch('%s holds an N=%d field, config expects N=%d' % (self.cfg.MESH.DIRFIELD, field.N, self.cfg.BRANCHED.N))
            fine, matching, branched = branched_subdivide(ctx, field, self.stencils, progress=True)
            outputs['dirfield'] = osp.join(self.save_dir, 'dirfield_l%d.txt' % self.level)
            outputs['matching'] = osp.join(self.save_dir, 'matching_l%d.txt' % self.level)
            write_dirfield(outputs['dirfield'], fine)
            write_matching(outputs['matching'], ctx.fine, matching)
            report['branched'] = branched
        else:
            if self.cfg.MESH.FIELD.endswith('.meancurl'):
                form = read_mean_curl(self.cfg.MESH.FIELD, self.mesh)
                gamma = from_mean_curl(self.mesh, form, self.cfg.SEM.NULL_SUM_TOL)
            elif self.cfg.MESH.FIELD:
                gamma = read_gamma(self.cfg.MESH.FIELD, self.mesh)
            else:
                gamma, residual = sample_field(self.mesh, self.cfg.SEM.FIELD)
                report['field'] = {'name': self.cfg.SEM.FIELD, 'projection_residual': residual}
            fine = ctx.subdivide(gamma)
            outputs['field'] = write_gamma(osp.join(self.save_dir, 'field_l%d.gamma' % self.level), fine)
            fine_form = to_mean_curl(ctx.fine, fine)
            outputs['mean_curl'] = write_mean_curl(osp.join(self.save_dir, 'field_l%d.meancurl' % self.level), fine_form)
            report['residuals']['fine_null_sum'] = null_sum_residual(ctx.fine, fine_form)
            report['field_norm'] = {'coarse': float(np.linalg.norm(gamma)), 'fine': float(np.linalg.norm(fine))}
        
        report['outputs'] = outputs
        self.passed = all(v <= self.tol for v in report['residuals'].values())
        return self.__finish__(report)
    
    def __finish__(self, report):
        
        report['passed'] = self.passed
        path = write_report(report, osp.join(self.save_dir, 'report.%s' % self.cfg.FORMAT), self.cfg.FORMAT)
        print('** Residual Report ** \n')
        pprint.pprint(report['residuals'], indent=4)
        print('Report written to: %s' % path)
        return report


class DesignRunner:
    
    def __init__(
        self,
        cfg
    ):
        
        self.cfg = cfg
        self.level = cfg.SUBDIVISION.LEVEL
        self.save_dir = osp.join(cfg.OUTPUT_DIR, cfg.RUN_NAME)
        if not osp.exists(self.save_dir):
            os.makedirs(self.save_dir)
        
        self.mesh = load_mesh(cfg.MESH.PATH, cfg.OPERATORS.DEGENERATE_AREA)
        print('Loaded mesh %s: %s' % (cfg.MESH.PATH, self.mesh))
        self.constraints = read_constraints(cfg.MESH.CONSTRAINTS, self.mesh) if cfg.MESH.CONSTRAINTS else {}
        print('Constrained faces: %d' % len(self.constraints))
        self.passed = False
    
    def run(self):
        
        ctx = SemContext.from_config(self.cfg, self.mesh)
        gamma, fine, report = design_field(ctx, self.constraints)
        report.update({'command': 'design', 'mesh': self.cfg.MESH.PATH, 'level': self.level, 'tol': self.cfg.TOL})
        report['outputs'] = {
            'coarse': write_gamma(osp.join(self.save_dir, 'design_l0.gamma'), gamma),
            'fine': write_gamma(osp.join(self.save_dir, 'design_l%d.gamma' % self.level), fine),
            'mesh': save_obj(osp.join(self.save_dir, 'mesh_l%d.obj' % self.level), ctx.fine)
        }
        self.passed = True
        report['passed'] = self.passed
        
        path = write_report(report, osp.join(self.save_dir, 'report.%s' % self.cfg.FORMAT), self.cfg.FORMAT)
        print('** Design Report ** \n')
        pprint.pprint({k: v for k, v in report.items() if k != 'outputs'}, indent=4)
        print('Report written to: %s' % path)
        return report
