import os

from ...base import CalibrationCommand
from ...renderers import AblationCSVRenderer
from ...utils import load_splits, real_pair, write_csv
from ....core.utils import mdts_setting
from ....mdts.utils import fit_domain_temperatures, fit_mdts
from ....metrics.utils import evaluate
from ....regress.models import KINDS
from ....regress.utils import select_hyperparams


class Command(CalibrationCommand):
    help = 'Compare MD-TS regressors, each with grid-searched hyperparameters.'
    common = ('data', 'out', 'bins', 'split_seed')

    def add_command_arguments(self, parser):
        parser.add_argument('--regressors', nargs='+', choices=KINDS, default=list(KINDS))
        parser.add_argument('--no-intercept', dest='intercept', action='store_false')
        parser.add_argument('--clamp', type=real_pair, metavar='LO,HI')
        parser.add_argument('--domain-weighting', action='store_true')

    def run(self, options):
        _, calibration, evaluation, ood = load_splits(options['data'], options['split_seed'])
        clamp = options['clamp'] or tuple(mdts_setting('TEMPERATURE_CLAMP'))
        bins = options['bins']
        per_domain_T = fit_domain_temperatures(calibration, clamp)

        rows = []
        for kind in options['regressors']:
            spec = select_hyperparams(
                kind, calibration, per_domain_T, intercept=options['intercept'],
                bins=bins, clamp=clamp, domain_weighting=options['domain_weighting'])
            model = fit_mdts(calibration, spec, clamp, options['domain_weighting'], per_domain_T)
            row = {
                'regressor': kind,
                'hyperparams': str(spec),
                'ind_mdece': evaluate(model, evaluation, bins).mdece,
                'ood_mdece': evaluate(model, ood, bins).mdece if ood is not None else None,
            }
            rows.append(row)
            self.stdout.write('%s\tInD MDECE=%.6f\tOOD MDECE=%s' % (
                spec, row['ind_mdece'],
                '-' if row['ood_mdece'] is None else '%.6f' % row['ood_mdece']))

        path = write_csv(os.path.join(options['out'], 'ablation.csv'), rows, AblationCSVRenderer)
        self.success('Wrote %s' % path)
