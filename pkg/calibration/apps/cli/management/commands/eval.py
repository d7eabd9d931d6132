import os

import numpy as np

from ...base import CalibrationCommand
from ...renderers import CompareTsCSVRenderer, TemperatureCSVRenderer
from ...utils import load_splits, read_calibrator, real_pair, write_csv
from ....core.exceptions import SchemaViolation
from ....core.utils import mdts_setting, write_json
from ....dataset.utils import POOLED_ID, pool
from ....metrics.renderers import ReliabilityCSVRenderer
from ....metrics.serializers import MultiDomainReportSerializer
from ....metrics.utils import evaluate, reliability_table
from ....ts.utils import fit_ts


class Command(CalibrationCommand):
    help = ('Evaluate a calibrator on the held-out in-distribution halves '
            'and on the out-of-distribution domains.')
    common = ('data', 'model', 'out', 'bins', 'split_seed')

    def add_command_arguments(self, parser):
        parser.add_argument('--reliability', action='append', default=[], metavar='DOMAIN',
                            help='Write the reliability table of DOMAIN (repeatable).')
        parser.add_argument('--compare-ts', action='store_true',
                            help='Also write per-domain ECE of pooled TS next to the model.')
        parser.add_argument('--clamp', type=real_pair, metavar='LO,HI')

    def run(self, options):
        dataset, calibration, evaluation, ood = load_splits(
            options['data'], options['split_seed'])
        calibrator = read_calibrator(options['model'], dataset)
        scopes = {'ind': evaluation}
        if ood is not None:
            scopes['ood'] = ood

        unknown = [name for name in options['reliability'] if name not in dataset.ids]
        if unknown:
            raise SchemaViolation({'reliability': 'unknown domains: %s' % ', '.join(unknown)})

        out, bins = options['out'], options['bins']
        reports = {scope: evaluate(calibrator, domains, bins) for scope, domains in scopes.items()}
        for scope, report in reports.items():
            write_json(os.path.join(out, 'report_%s.json' % scope),
                       MultiDomainReportSerializer(report).data)
            write_csv(os.path.join(out, 'reliability_%s_%s.csv' % (scope, POOLED_ID)),
                      reliability_table(report.pooled), ReliabilityCSVRenderer)
            for name in options['reliability']:
                if name in report.per_domain:
                    write_csv(os.path.join(out, 'reliability_%s.csv' % name),
                              reliability_table(report.per_domain[name]),
                              ReliabilityCSVRenderer)
            self.stdout.write('%s\tMDECE=%.6f\tpooled ECE=%.6f\tdomains=%d' % (
                scope, report.mdece, report.pooled_ece, len(report.per_domain)))

        if calibrator.kind == 'mdts':
            write_csv(os.path.join(out, 'temperatures.csv'),
                      temperature_rows(calibrator, scopes), TemperatureCSVRenderer)
        if options['compare_ts']:
            clamp = options['clamp'] or tuple(mdts_setting('TEMPERATURE_CLAMP'))
            ts_model = fit_ts(pool(calibration), *clamp)
            rows = []
            for scope, domains in scopes.items():
                ts_report = evaluate(ts_model, domains, bins)
                rows.extend({
                    'domain': domain_id, 'scope': scope,
                    'ts_ece': ts_report.per_domain[domain_id].ece,
                    'model_ece': report.ece,
                } for domain_id, report in reports[scope].per_domain.items())
            write_csv(os.path.join(out, 'compare_ts.csv'), rows, CompareTsCSVRenderer)
        self.success('Wrote reports to %s' % out)


def temperature_rows(model, scopes):
    """Fitted T_k (InD only) against the spread of predicted temperatures."""
    rows = []
    for scope, domains in scopes.items():
        for domain in domains:
            predicted = model.predict_temperature(domain.embeddings)
            rows.append({
                'domain': domain.id,
                'scope': scope,
                'fitted_T': model.per_domain_T.get(domain.id),
                'mean_T': float(np.mean(predicted)),
                'std_T': float(np.std(predicted)),
                'n': domain.n,
            })
    return rows
