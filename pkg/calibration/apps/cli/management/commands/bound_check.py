import os

from ...base import CalibrationCommand
from ...utils import read_calibrator, real_list
from ....core.exceptions import BoundFailed, SchemaViolation
from ....core.utils import mdts_setting, write_json
from ....dataset.storage import load
from ....theory.models import HypothesisFamily, MixtureWeights
from ....theory.serializers import DivergenceReportSerializer
from ....theory.utils import check_bound, confidence_map, optimize_alpha


class Command(CalibrationCommand):
    help = ('Check the OOD calibration-risk bound of a fitted calibrator on a '
            'dataset with oracle confidences. Exits 2 when the bound fails.')
    common = ('data', 'model', 'out')

    def add_command_arguments(self, parser):
        defaults = mdts_setting('BOUND')
        parser.add_argument('--ood', metavar='DOMAIN',
                            help='Held-out domain; defaults to the first OOD domain.')
        parser.add_argument('--slack', type=float, default=defaults['SLACK'])
        parser.add_argument('--temp-grid', type=int, default=defaults['TEMP_GRID'], metavar='G')
        parser.add_argument('--threshold-grid', type=int, default=defaults['THRESHOLD_GRID'],
                            metavar='R')
        parser.add_argument('--alpha-resolution', type=int,
                            default=defaults['ALPHA_RESOLUTION'])
        parser.add_argument('--alpha', type=real_list, metavar='A1,...,AK',
                            help='Fixed mixture weights instead of the lattice search.')

    def run(self, options):
        dataset = load(options['data'])
        ind = [domain for domain in dataset.select('ind') if domain.id != options['ood']]
        ood = self.ood_domain(dataset, options['ood'])
        hhat = confidence_map(read_calibrator(options['model'], dataset))
        family = HypothesisFamily.grid(options['temp_grid'], options['threshold_grid'])

        if options['alpha'] is None:
            alpha = optimize_alpha(ind, ood, family, options['alpha_resolution'])
        else:
            if len(options['alpha']) != len(ind):
                raise SchemaViolation({'alpha': 'expected %d weights' % len(ind)})
            alpha = MixtureWeights(options['alpha'])

        report = check_bound(ind, ood, hhat, family, alpha, options['slack'])
        path = write_json(os.path.join(options['out'], 'bound.json'),
                          DivergenceReportSerializer(report).data)
        self.stdout.write('%s\tlhs=%.6f\trhs=%.6f\td=%.6f\tlambda=%.6f' % (
            ood.id, report.lhs, report.rhs, report.d_hbar, report.lambda_))
        if not report.holds:
            raise BoundFailed({'lhs': report.lhs, 'rhs': report.rhs, 'report': path})
        self.success('Bound holds; wrote %s' % path)

    @staticmethod
    def ood_domain(dataset, name):
        if name is not None:
            if name not in dataset.ids:
                raise SchemaViolation({'ood': 'unknown domain %s' % name})
            return dataset.get(name)
        if not dataset.has_split('ood'):
            raise SchemaViolation({'ood': 'the dataset has no out-of-distribution domain'})
        return dataset.select('ood').domains[0]
