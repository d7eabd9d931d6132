import os

from ...base import CalibrationCommand
from ...utils import load_splits, real_pair, write_calibrator
from ....baselines.utils import fit_histbin, fit_isotonic
from ....core.utils import mdts_setting
from ....dataset.utils import pool
from ....mdts.utils import fit_domain_temperatures, fit_mdts
from ....regress.models import KINDS, RegressorSpec
from ....regress.utils import select_hyperparams
from ....ts.utils import fit_ts

METHODS = ('ts', 'mdts', 'histbin', 'isotonic')
MODEL_NAME = 'model.json'


class Command(CalibrationCommand):
    help = 'Fit a calibrator on the calibration half of the in-distribution domains.'
    common = ('data', 'out', 'bins', 'split_seed')

    def add_command_arguments(self, parser):
        parser.add_argument('--method', choices=METHODS, default='mdts')
        parser.add_argument('--regressor', choices=KINDS, default='ols')
        parser.add_argument('--no-intercept', dest='intercept', action='store_false')
        parser.add_argument('--grid-search', action='store_true',
                            help='Pick hyperparameters by leave-one-domain-out MDECE.')
        parser.add_argument('--clamp', type=real_pair, metavar='LO,HI')
        parser.add_argument('--domain-weighting', action='store_true',
                            help='Give every domain the same total regression weight.')

    def run(self, options):
        _, calibration, _, _ = load_splits(options['data'], options['split_seed'])
        clamp = options['clamp'] or tuple(mdts_setting('TEMPERATURE_CLAMP'))
        method = options['method']

        if method == 'ts':
            model = fit_ts(pool(calibration), *clamp)
            self.stdout.write('pooled\tT=%.6f' % model.T)
        elif method == 'histbin':
            model = fit_histbin(pool(calibration), options['bins'])
        elif method == 'isotonic':
            model = fit_isotonic(pool(calibration))
        else:
            model = self.fit_mdts(calibration, clamp, options)

        path = write_calibrator(model, os.path.join(options['out'], MODEL_NAME))
        self.success('Wrote %s model to %s' % (method, path))

    def fit_mdts(self, calibration, clamp, options):
        per_domain_T = fit_domain_temperatures(calibration, clamp)
        if options['grid_search']:
            spec = select_hyperparams(
                options['regressor'], calibration, per_domain_T,
                intercept=options['intercept'], bins=options['bins'], clamp=clamp,
                domain_weighting=options['domain_weighting'])
        else:
            spec = RegressorSpec.default(options['regressor'], intercept=options['intercept'])

        model = fit_mdts(calibration, spec, clamp, options['domain_weighting'], per_domain_T)
        for domain_id, T in model.per_domain_T.items():
            self.stdout.write('%s\tT=%.6f' % (domain_id, T))
        self.stdout.write('regressor\t%s' % spec)
        return model
