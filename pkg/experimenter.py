import os
import pprint
import numpy as np
import os.path as osp
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
from mesh import load_mesh
from subdivision import StencilSet, derive_constrained_stencils, spectral_check
from halfedge import read_gamma, write_gamma
from sem import SemContext, sem_hodge_decompose, sample_field, avail_experiments
from utils import TensorBoardLogger, write_report, print_table


class HodgeRunner:
    
    def __init__(
        self,
        cfg
    ):
        
        self.cfg = cfg
        self.tol = cfg.TOL
        self.save_dir = osp.join(cfg.OUTPUT_DIR, cfg.RUN_NAME)
        if not osp.exists(self.save_dir):
            os.makedirs(self.save_dir)
        
        self.mesh = load_mesh(cfg.MESH.PATH, cfg.OPERATORS.DEGENERATE_AREA)
        print('Loaded mesh %s: %s (genus %d)' % (cfg.MESH.PATH, self.mesh, self.mesh.genus))
        if cfg.MESH.FIELD:
            self.gamma = read_gamma(cfg.MESH.FIELD, self.mesh)
        else:
            print('No field file given, sampling the %s field' % cfg.SEM.FIELD)
            self.gamma, _ = sample_field(self.mesh, cfg.SEM.FIELD)
        self.passed = False
    
    def run(self):
        
        ctx = SemContext.from_config(self.cfg, self.mesh)
        result = sem_hodge_decompose(ctx, self.gamma, self.cfg.SEM.HARMONIC_TOL, self.cfg.SEM.DENSE_LIMIT)
        
        report = {'command': 'hodge', 'mesh': self.cfg.MESH.PATH, 'level': ctx.level, 'tol': self.tol}
        report.update(result.report)
        report['outputs'] = {name: write_gamma(osp.join(self.save_dir, '%s.gamma' % name), getattr(result, name))
                             for name in ['exact', 'coexact', 'harmonic']}
        report['outputs']['potential'] = osp.join(self.save_dir, 'potential.txt')
        np.savetxt(report['outputs']['potential'], result.f)
        
        gated = [v for k, v in result.report.items() if k.startswith('residual/') or k.startswith('orthogonality/')]
        self.passed = all(v <= self.tol for v in gated)
        report['passed'] = self.passed
        
        path = write_report(report, osp.join(self.save_dir, 'report.%s' % self.cfg.FORMAT), self.cfg.FORMAT)
        print('** Hodge Report ** \n')
        pprint.pprint(result.report, indent=4)
        print('Report written to: %s' % path)
        return report


class ExperimentRunner:
    
    def __init__(
        self,
        cfg
    ):
        
        self.cfg = cfg
        self.name = cfg.SEM.EXPERIMENT
        if self.name not in avail_experiments:
            raise ValueError('Only %s experiments are supported.' % ', '.join(sorted(avail_experiments)))
        self.save_dir = osp.join(cfg.OUTPUT_DIR, cfg.RUN_NAME)
        if not osp.exists(self.save_dir):
            os.makedirs(self.save_dir)
        
        self.mesh = load_mesh(cfg.MESH.PATH, cfg.OPERATORS.DEGENERATE_AREA)
        print('Loaded mesh %s: %s' % (cfg.MESH.PATH, self.mesh))
        
        self.tb = None
        if cfg.USE_TB:
            self.tb = TensorBoardLogger(
                fpath=osp.join(cfg.LOG_DIR, cfg.RUN_NAME),
                filename=cfg.TB_DIR
            )
        self.passed = False
    
    def __plot__(self, report, keys, xkey, fname):
        
        _, ax = plt.subplots(figsize=(6, 5))
        x = [r[xkey] for r in report['records']]
        for key in keys:
            y = [r[key] for r in report['records']]
            ax.loglog(x, y, marker='o', label=key)
        ax.set_xlabel(xkey)
        ax.set_ylabel('error')
        ax.set_title('%s (%s)' % (self.name, self.cfg.MESH.PATH))
        ax.legend()
        path = osp.join(self.save_dir, fname)
        plt.savefig(path)
        plt.close()
        return path
    
    def run(self):
        
        ctx = SemContext.from_config(self.cfg, self.mesh)
        if self.name == 'spectrum':
            report = avail_experiments[self.name](ctx, self.cfg.SEM.NUM_EIGS, self.cfg.SEM.DENSE_LIMIT, seed=max(self.cfg.SEED, 0))
            keys = ['index', 'kind', 'fine', 'sem', 'fem', 'sem/rel_error', 'fem/rel_error']
        else:
            report = avail_experiments[self.name](ctx, self.cfg.SEM.FIELD, progress=True)
            keys = list(report['records'][0].keys())
        report.update({'command': 'experiment', 'mesh': self.cfg.MESH.PATH, 'tol': self.cfg.TOL})
        
        print_table(report['records'], keys)
        if self.name == 'projection-error':
            report['plot'] = self.__plot__(report, ['sem/L2', 'fem/L2', 'sem/curl_L2', 'fem/curl_L2'], 'h', 'convergence.png')
            print('Fitted slopes:')
            pprint.pprint(report['slopes'], indent=4)
        elif self.name == 'operator-error':
            report['plot'] = self.__plot__(report, ['L2', 'Linf'], 'level', 'operator_error.png')
        else:
            print('SEM better than FEM on %.1f%% of the indices' % (100 * report['sem_better_share']))
        
        if self.tb is not None:
            for it, record in enumerate(report['records']):
                self.tb.update({'%s/%s' % (self.name, k): v for k, v in record.items() if isinstance(v, float)}, it)
            self.tb.close()
        
        self.passed = True
        report['passed'] = self.passed
        path = write_report(report, osp.join(self.save_dir, 'report.%s' % self.cfg.FORMAT), self.cfg.FORMAT)
        print('Report written to: %s' % path)
        return report


class StencilRunner:
    
    def __init__(
        self,
        cfg
    ):
        
        self.cfg = cfg
        self.action = cfg.STENCIL.ACTION
        if self.action not in ('derive', 'dump', 'check'):
            raise ValueError('Only derive, dump and check stencil actions are supported.')
        self.tol = cfg.TOL
        self.save_dir = osp.join(cfg.OUTPUT_DIR, cfg.RUN_NAME)
        if not osp.exists(self.save_dir):
            os.makedirs(self.save_dir)
        self.stencils = StencilSet.from_config(cfg)
        self.passed = False
    
    def run(self):
        
        rings = self.cfg.STENCIL.PATCH_RINGS
        if self.action != 'dump':
            print('Deriving stencils up to valence %d on %d-ring patches' % (self.stencils.max_valence, rings))
            derive_constrained_stencils(self.stencils, rings=rings, progress=True)
        else:
            self.stencils.spectra[('S_E', 4, False)] = spectral_check(self.stencils, 4, rings=rings)
        
        dump = self.stencils.dump()
        path = write_report(dump, osp.join(self.save_dir, 'stencils.json'), 'json')
        print('Stencils written to: %s' % path)
        
        report = {'command': 'stencil', 'action': self.action, 'tol': self.tol,
                  'system_residuals': dump['system_residuals'],
                  'valence4_edge_spectrum': dump['valence4_edge_spectrum'], 'stencils': path}
        if self.action == 'check':
            residuals = self.stencils.residuals
            flagged = ['%s/%s/%d' % (op, 'boundary' if b else 'interior', d)
                       for (op, d, b), s in sorted(self.stencils.spectra.items()) if s['flagged']]
            records = [{'valence': d, 'boundary': b, 'residual': r,
                        'S_E/subdominant': self.stencils.spectra[('S_E', d, b)]['subdominant'],
                        'S_V/subdominant': self.stencils.spectra[('S_V', d, b)]['subdominant']}
                       for (d, b), r in sorted(residuals.items())]
            print_table(records, ['valence', 'boundary', 'residual', 'S_V/subdominant', 'S_E/subdominant'])
            report['records'] = records
            report['max_residual'] = max(list(residuals.values()) + list(self.stencils.system_residuals.values()))
            report['flagged'] = flagged
            self.passed = report['max_residual'] <= self.tol and not flagged
        else:
            self.passed = True
        report['passed'] = self.passed
        
        path = write_report(report, osp.join(self.save_dir, 'report.%s' % self.cfg.FORMAT), self.cfg.FORMAT)
        print('** Stencil Report ** \n')
        pprint.pprint({k: v for k, v in report.items() if k != 'records'}, indent=4)
        print('Report written to: %s' % path)
        return report
