import os

from ...base import CalibrationCommand
from ...renderers import AccuracyCSVRenderer
from ...utils import load_splits, read_calibrator, real_pair, write_csv
from ....core.utils import mdts_setting, write_json
from ....dataset.utils import pool
from ....metrics.utils import accuracy_prediction_mae, evaluate
from ....probcore.utils import MspCalibrator
from ....synth.utils import oracle_multi_domain_report
from ....ts.utils import fit_ts


class Command(CalibrationCommand):
    help = 'Compare mean confidence with accuracy per domain for MSP, TS and a model.'
    common = ('data', 'model', 'out', 'bins', 'split_seed')

    def add_command_arguments(self, parser):
        parser.add_argument('--ts-model', metavar='FILE',
                            help='Fitted TS file; pooled TS is fitted when omitted.')
        parser.add_argument('--clamp', type=real_pair, metavar='LO,HI')

    def run(self, options):
        dataset, calibration, evaluation, ood = load_splits(
            options['data'], options['split_seed'])
        model = read_calibrator(options['model'], dataset)
        if options['ts_model']:
            ts_model = read_calibrator(options['ts_model'], dataset)
        else:
            clamp = options['clamp'] or tuple(mdts_setting('TEMPERATURE_CLAMP'))
            ts_model = fit_ts(pool(calibration), *clamp)

        model_column = model.kind if model.kind not in ('msp', 'ts') else 'model'
        calibrators = (('msp', MspCalibrator()), ('ts', ts_model), (model_column, model))
        scopes = {'ind': evaluation}
        if ood is not None:
            scopes['ood'] = ood
        with_oracle = all(domain.has_oracle for domain in dataset)

        rows, summary = [], {}
        for scope, domains in scopes.items():
            reports = {name: evaluate(calibrator, domains, options['bins'])
                       for name, calibrator in calibrators}
            if with_oracle:
                reports['oracle'] = oracle_multi_domain_report(domains, options['bins'])
            summary[scope] = {
                name: accuracy_prediction_mae(report.per_domain)
                for name, report in reports.items()}
            for domain in domains:
                row = {'domain': domain.id, 'scope': scope,
                       'acc': reports['msp'].per_domain[domain.id].mean_acc}
                for name, report in reports.items():
                    row['%s_conf' % name] = report.per_domain[domain.id].mean_conf
                rows.append(row)
            self.stdout.write('%s\t%s' % (scope, '\t'.join(
                '%s MAE=%.6f' % item for item in summary[scope].items())))

        names = [name for name, _ in calibrators] + (['oracle'] if with_oracle else [])
        header = ('domain', 'scope', 'acc') + tuple('%s_conf' % name for name in names)
        out = options['out']
        write_csv(os.path.join(out, 'predict_acc.csv'), rows, AccuracyCSVRenderer, header)
        write_json(os.path.join(out, 'predict_acc.json'), {'mae': summary})
        self.success('Wrote accuracy predictions to %s' % out)
