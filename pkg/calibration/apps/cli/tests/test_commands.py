"""Test the toolkit subcommands end to end"""
import csv
import io
import json
import os
import shutil
import subprocess
import sys
import tempfile

import numpy as np
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from rest_framework.test import APISimpleTestCase

from ...core.utils import read_json
from ...dataset.models import DomainDataset, MultiDomainDataset
from ...dataset.storage import GROUND_TRUTH_NAME, MANIFEST_NAME, load, save
from ...mdts.models import MdtsModel
from ...probcore.utils import confidence
from ...regress.models import LinearRegressor, RegressorSpec
from ...synth.utils import oracle_multi_domain_report
from ...ts.models import TemperatureModel
from ..management.commands.fit import Command as FitCommand
from ..utils import write_calibrator


def read_rows(path):
    with open(path, newline='') as stream:
        return list(csv.DictReader(stream))


class CommandTestCase(APISimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.tmp)

    def path(self, *parts):
        return os.path.join(self.tmp, *parts)

    def call(self, name, *args):
        stdout, stderr = io.StringIO(), io.StringIO()
        call_command(name, *args, stdout=stdout, stderr=stderr)
        return stdout.getvalue()

    def call_failing(self, returncode, name, *args):
        with self.assertRaises(CommandError) as context:
            self.call(name, *args)
        self.assertEqual(context.exception.returncode, returncode)
        return str(context.exception)

    def synth(self, out, *args):
        self.call('synth', '--out', out, *args)
        return out


class SynthCommandTest(CommandTestCase):
    """ Class contains methods testing the synth command."""

    def test_writes_dataset(self):
        """
        test synth writes the domain files, the manifest and the ground truth
        """
        out = self.synth(self.path('d'), '--domains', '5', '--classes', '10',
                         '--per-domain', '200', '--seed', '7')

        files = sorted(os.listdir(out))
        self.assertIn(MANIFEST_NAME, files)
        self.assertIn(GROUND_TRUTH_NAME, files)
        self.assertEqual(len([name for name in files if name.endswith('.csv')]), 5)
        self.assertEqual(len(read_json(os.path.join(out, GROUND_TRUTH_NAME))), 5)
        self.assertTrue(load(out).domains[0].has_oracle)

    def test_deterministic(self):
        """
        test repeating synth with the same flags gives identical files
        """
        flags = ('--domains', '3', '--ood-domains', '1', '--classes', '4',
                 '--per-domain', '50', '--seed', '3')
        first = self.synth(self.path('a'), *flags)
        second = self.synth(self.path('b'), *flags)

        self.assertEqual(sorted(os.listdir(first)), sorted(os.listdir(second)))
        for name in os.listdir(first):
            with open(os.path.join(first, name), 'rb') as left, \
                    open(os.path.join(second, name), 'rb') as right:
                self.assertEqual(left.read(), right.read(), name)

    def test_zero_domains(self):
        """
        test --domains 0 is a validation error naming K
        """
        message = self.call_failing(1, 'synth', '--out', self.path('d'), '--domains', '0',
                                    '--classes', '3', '--per-domain', '10')

        self.assertIn('K', json.loads(message)['errors'])

    def test_bad_flag_value(self):
        """
        test a malformed pair is an argument error
        """
        self.call_failing(1, 'synth', '--out', self.path('d'), '--domains', '2',
                          '--classes', '3', '--per-domain', '10', '--c-range', 'wide')


class FitCommandTest(CommandTestCase):
    """ Class contains methods testing the fit command."""

    def setUp(self):
        super().setUp()
        self.data = self.synth(self.path('data'), '--domains', '4', '--ood-domains', '1',
                               '--classes', '5', '--per-domain', '2000', '--seed', '11')
        self.ground_truth = read_json(os.path.join(self.data, GROUND_TRUTH_NAME))

    def test_mdts(self):
        """
        test an OLS MD-TS fit recovers every in-distribution temperature
        """
        output = self.call('fit', '--data', self.data, '--out', self.path('m'),
                           '--method', 'mdts', '--regressor', 'ols')

        model = read_json(self.path('m', 'model.json'))
        self.assertEqual(model['type'], 'mdts')
        self.assertEqual(sorted(model['per_domain_T']), ['ind-00', 'ind-01', 'ind-02', 'ind-03'])
        for domain_id, T in model['per_domain_T'].items():
            c = self.ground_truth[domain_id]
            self.assertLessEqual(abs(T - c), 0.1 * c)
            self.assertIn(domain_id, output)

    def test_ts(self):
        """
        test --method ts writes one pooled temperature
        """
        self.call('fit', '--data', self.data, '--out', self.path('m'), '--method', 'ts',
                  '--clamp', '0.1,10')

        model = read_json(self.path('m', 'model.json'))
        self.assertEqual(model['type'], 'ts')
        self.assertEqual((model['t_min'], model['t_max']), (0.1, 10.0))

    def test_baselines(self):
        """
        test histbin and isotonic fits write their model types
        """
        for method in ('histbin', 'isotonic'):
            self.call('fit', '--data', self.data, '--out', self.path(method),
                      '--method', method, '--bins', '10')
            self.assertEqual(read_json(self.path(method, 'model.json'))['type'], method)

    def test_grid_search(self):
        """
        test a grid-searched ridge fit records the selected penalty
        """
        self.call('fit', '--data', self.data, '--out', self.path('m'),
                  '--regressor', 'ridge', '--grid-search')

        regressor = read_json(self.path('m', 'model.json'))['regressor']
        self.assertEqual(regressor['kind'], 'ridge')
        self.assertIn(regressor['hyperparams']['lam'], [1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0])

    def test_unknown_regressor(self):
        """
        test an unknown regressor name exits 1
        """
        self.call_failing(1, 'fit', '--data', self.data, '--out', self.path('m'),
                          '--regressor', 'forest')

    def test_unknown_regressor_from_command_line(self):
        """
        test an unknown regressor prints usage and exits 1 without a traceback
        """
        stderr = io.StringIO()
        command = FitCommand(stdout=io.StringIO(), stderr=stderr)

        with self.assertRaises(SystemExit) as context:
            command.run_from_argv(['mdts-calib', 'fit', '--data', self.data,
                                   '--out', self.path('m'), '--regressor', 'forest'])

        self.assertEqual(context.exception.code, 1)
        self.assertIn('usage:', stderr.getvalue())
        self.assertIn('invalid choice', stderr.getvalue())
        self.assertFalse(os.path.exists(self.path('m')))

    def test_launcher_usage_error(self):
        """
        test the mdts-calib launcher reports an argument error as usage text
        """
        launcher = os.path.join(os.path.dirname(settings.BASE_DIR), 'mdts-calib')
        env = dict(os.environ, DJANGO_SETTINGS_MODULE='calibration.settings.test')

        result = subprocess.run(
            [sys.executable, launcher, 'fit', '--data', self.data, '--out', self.path('m'),
             '--regressor', 'forest'],
            capture_output=True, text=True, env=env, check=False)

        self.assertEqual(result.returncode, 1)
        self.assertIn('usage:', result.stderr)
        self.assertNotIn('Traceback', result.stderr)

    def test_negative_split_seed(self):
        """
        test a negative split seed is a configuration error
        """
        message = self.call_failing(1, 'fit', '--data', self.data, '--out', self.path('m'),
                                    '--split-seed', '-1')

        self.assertIn('split_seed', json.loads(message)['errors'])
        self.assertFalse(os.path.exists(self.path('m')))

    def test_grid_search_needs_two_domains(self):
        """
        test grid search on one in-distribution domain exits 1
        """
        data = self.synth(self.path('one'), '--domains', '1', '--classes', '3',
                          '--per-domain', '40')

        message = self.call_failing(1, 'fit', '--data', data, '--out', self.path('m'),
                                    '--grid-search')
        self.assertIn('domains', json.loads(message)['errors'])

    def test_missing_dataset(self):
        """
        test a missing dataset directory exits 3 before any work
        """
        self.call_failing(3, 'fit', '--data', self.path('nowhere'), '--out', self.path('m'))
        self.assertFalse(os.path.exists(self.path('m')))


class EvalCommandTest(CommandTestCase):
    """ Class contains methods testing the eval command."""

    def setUp(self):
        super().setUp()
        self.data = self.synth(self.path('data'), '--domains', '3', '--ood-domains', '2',
                               '--classes', '4', '--per-domain', '300', '--seed', '5')
        self.dataset = load(self.data)
        self.call('fit', '--data', self.data, '--out', self.path('m'))

    def test_reports(self):
        """
        test eval writes InD and OOD reports plus reliability tables
        """
        self.call('eval', '--data', self.data, '--model', self.path('m', 'model.json'),
                  '--out', self.path('e'), '--reliability', 'ood-01')

        ind = read_json(self.path('e', 'report_ind.json'))
        ood = read_json(self.path('e', 'report_ood.json'))
        self.assertEqual([entry['domain'] for entry in ind['per_domain']],
                         ['ind-00', 'ind-01', 'ind-02'])
        self.assertEqual([entry['n'] for entry in ind['per_domain']], [150, 150, 150])
        self.assertEqual([entry['n'] for entry in ood['per_domain']], [300, 300])
        self.assertEqual(ind['bins'], 20)
        self.assertIn('pooled_ece', ood)
        self.assertEqual(len(read_rows(self.path('e', 'reliability_ind_pooled.csv'))), 20)
        self.assertEqual(len(read_rows(self.path('e', 'reliability_ood-01.csv'))), 20)

    def test_temperature_table(self):
        """
        test mdts models get a predicted-temperature table; OOD rows have no fitted T
        """
        self.call('eval', '--data', self.data, '--model', self.path('m', 'model.json'),
                  '--out', self.path('e'))

        rows = read_rows(self.path('e', 'temperatures.csv'))
        self.assertEqual([row['domain'] for row in rows],
                         ['ind-00', 'ind-01', 'ind-02', 'ood-00', 'ood-01'])
        self.assertEqual(rows[3]['fitted_T'], '')
        self.assertNotEqual(rows[0]['fitted_T'], '')
        self.assertGreater(float(rows[0]['std_T']), 0.0)

    def test_unit_temperature_is_msp(self):
        """
        test an mdts model predicting T = 1 reports exactly like msp
        """
        regressor = LinearRegressor(spec=RegressorSpec('ols'),
                                    theta=np.zeros(self.dataset.embedding_dim), intercept=1.0)
        write_calibrator(MdtsModel(per_domain_T={}, regressor=regressor, clamp=(0.05, 50.0),
                                   num_classes=4, embedding_dim=self.dataset.embedding_dim),
                         self.path('unit.json'))

        self.call('eval', '--data', self.data, '--model', self.path('unit.json'),
                  '--out', self.path('unit'))
        self.call('eval', '--data', self.data, '--model', 'msp', '--out', self.path('msp'))

        for name in ('report_ind.json', 'report_ood.json'):
            self.assertEqual(read_json(self.path('unit', name)), read_json(self.path('msp', name)))

    def test_single_bin(self):
        """
        test --bins 1 makes each domain's ECE |acc - conf|
        """
        self.call('eval', '--data', self.data, '--model', self.path('m', 'model.json'),
                  '--out', self.path('e'), '--bins', '1')

        for entry in read_json(self.path('e', 'report_ind.json'))['per_domain']:
            self.assertAlmostEqual(entry['ece'], abs(entry['acc'] - entry['conf']), places=12)

    def test_compare_ts(self):
        """
        test --compare-ts lists TS and model ECE for every domain
        """
        self.call('eval', '--data', self.data, '--model', self.path('m', 'model.json'),
                  '--out', self.path('e'), '--compare-ts')

        rows = read_rows(self.path('e', 'compare_ts.csv'))
        self.assertEqual([row['scope'] for row in rows], ['ind'] * 3 + ['ood'] * 2)
        self.assertEqual(list(rows[0]), ['domain', 'scope', 'ts_ece', 'model_ece'])

    def test_model_mismatch(self):
        """
        test a model fitted for other dimensions exits 1
        """
        other = self.synth(self.path('other'), '--domains', '2', '--classes', '6',
                           '--per-domain', '40')
        self.call('fit', '--data', other, '--out', self.path('other-model'))

        message = self.call_failing(1, 'eval', '--data', self.data,
                                    '--model', self.path('other-model', 'model.json'),
                                    '--out', self.path('e'))
        self.assertIn('model', json.loads(message)['errors'])

    def test_unknown_reliability_domain(self):
        """
        test asking for the reliability of an unknown domain exits 1
        """
        self.call_failing(1, 'eval', '--data', self.data, '--model', 'msp',
                          '--out', self.path('e'), '--reliability', 'nowhere')


class AblateCommandTest(CommandTestCase):
    """ Class contains methods testing the ablate command."""

    def setUp(self):
        super().setUp()
        self.data = self.synth(self.path('data'), '--domains', '4', '--ood-domains', '1',
                               '--classes', '4', '--per-domain', '300', '--seed', '9')

    def test_all_regressors(self):
        """
        test one row per regressor, with OLS matching a standalone fit and eval
        """
        self.call('ablate', '--data', self.data, '--out', self.path('a'))
        self.call('fit', '--data', self.data, '--out', self.path('m'), '--grid-search')
        self.call('eval', '--data', self.data, '--model', self.path('m', 'model.json'),
                  '--out', self.path('e'))

        rows = read_rows(self.path('a', 'ablation.csv'))
        self.assertEqual([row['regressor'] for row in rows],
                         ['ols', 'ridge', 'huber', 'krr', 'knn'])
        self.assertEqual(float(rows[0]['ind_mdece']),
                         read_json(self.path('e', 'report_ind.json'))['mdece'])
        self.assertEqual(float(rows[0]['ood_mdece']),
                         read_json(self.path('e', 'report_ood.json'))['mdece'])


class PredictAccCommandTest(CommandTestCase):
    """ Class contains methods testing the predict_acc command."""

    def test_unit_ts_matches_msp(self):
        """
        test TS with T = 1 predicts the same accuracy as msp
        """
        data = self.synth(self.path('data'), '--domains', '2', '--classes', '4',
                          '--per-domain', '200', '--seed', '1')
        write_calibrator(TemperatureModel(T=1.0, t_min=0.05, t_max=50.0), self.path('ts.json'))

        self.call('predict_acc', '--data', data, '--model', 'msp',
                  '--ts-model', self.path('ts.json'), '--out', self.path('p'))

        rows = read_rows(self.path('p', 'predict_acc.csv'))
        self.assertEqual(list(rows[0]),
                         ['domain', 'scope', 'acc', 'msp_conf', 'ts_conf', 'model_conf',
                          'oracle_conf'])
        for row in rows:
            self.assertEqual(row['msp_conf'], row['ts_conf'])
        mae = read_json(self.path('p', 'predict_acc.json'))['mae']['ind']
        self.assertEqual(mae['msp'], mae['ts'])

    def test_oracle_floor(self):
        """
        test oracle confidences predict accuracy within 0.03 at n = 10000
        """
        data = self.synth(self.path('data'), '--domains', '1', '--classes', '5',
                          '--per-domain', '20000', '--seed', '2')

        self.call('predict_acc', '--data', data, '--model', 'msp', '--out', self.path('p'))

        mae = read_json(self.path('p', 'predict_acc.json'))['mae']['ind']
        self.assertLessEqual(mae['oracle'], 0.03)


class BoundCheckCommandTest(CommandTestCase):
    """ Class contains methods testing the bound_check command."""

    def setUp(self):
        super().setUp()
        rng = np.random.default_rng(13)
        self.logits = rng.normal(scale=2.0, size=(300, 4))
        self.labels = rng.integers(0, 4, 300)
        self.oracle = confidence(self.logits, 1.0)

    def write_dataset(self, ood_embedding):
        domains = [
            DomainDataset(id='ind-00', labels=self.labels, logits=self.logits,
                          embeddings=np.zeros((300, 1)), oracle_conf=self.oracle),
            DomainDataset(id='ind-01', labels=self.labels, logits=3.0 * self.logits,
                          embeddings=np.full((300, 1), 0.5), oracle_conf=self.oracle),
            DomainDataset(id='ood-00', labels=self.labels, logits=self.logits,
                          embeddings=np.full((300, 1), ood_embedding),
                          oracle_conf=self.oracle, split_tag='ood'),
        ]
        save(MultiDomainDataset(num_classes=4, embedding_dim=1, domains=domains),
             self.path('data'))
        return self.path('data')

    def write_model(self, slope):
        regressor = LinearRegressor(spec=RegressorSpec('ols'), theta=[slope], intercept=1.0)
        model = MdtsModel(per_domain_T={'ind-00': 1.0, 'ind-01': 3.0}, regressor=regressor,
                          clamp=(0.05, 50.0), num_classes=4, embedding_dim=1)
        return write_calibrator(model, self.path('model.json'))

    def test_copied_domain_without_slack(self):
        """
        test an OOD copy of an InD domain holds with zero slack at its vertex
        """
        data = self.write_dataset(0.0)

        self.call('bound_check', '--data', data, '--model', self.write_model(4.0),
                  '--out', self.path('b'), '--alpha', '1,0', '--slack', '0')

        report = read_json(self.path('b', 'bound.json'))
        self.assertTrue(report['holds'])
        self.assertEqual(report['d_hbar'], 0.0)
        self.assertEqual(report['alpha'], [1.0, 0.0])

    def test_failing_bound(self):
        """
        test a calibrator that breaks only off-distribution exits 2 with a report
        """
        data = self.write_dataset(12.0)

        message = self.call_failing(2, 'bound_check', '--data', data,
                                    '--model', self.write_model(4.0), '--out', self.path('b'))

        self.assertFalse(read_json(self.path('b', 'bound.json'))['holds'])
        self.assertIn('lhs', json.loads(message)['errors'])

    def test_synthetic_instance(self):
        """
        test the bound holds for a fitted MD-TS on a random K = 3 instance
        """
        data = self.synth(self.path('synth'), '--domains', '3', '--ood-domains', '1',
                          '--classes', '5', '--per-domain', '500', '--seed', '23')
        self.call('fit', '--data', data, '--out', self.path('m'))

        self.call('bound_check', '--data', data, '--model', self.path('m', 'model.json'),
                  '--out', self.path('b'), '--slack', '0.05')

        report = read_json(self.path('b', 'bound.json'))
        self.assertTrue(report['holds'])
        self.assertEqual(len(report['alpha']), 3)

    def test_too_many_domains(self):
        """
        test five in-distribution domains exceed the exhaustive search
        """
        data = self.synth(self.path('synth'), '--domains', '5', '--ood-domains', '1',
                          '--classes', '3', '--per-domain', '20')

        message = self.call_failing(1, 'bound_check', '--data', data, '--model', 'msp',
                                    '--out', self.path('b'))
        self.assertEqual(json.loads(message)['errors']['K'], '5')


class HeadlineExperimentTest(APISimpleTestCase):
    """ Class contains methods testing MD-TS against pooled TS on the ten-domain synthetic run."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.tmp = tempfile.mkdtemp()
        cls.addClassCleanup(shutil.rmtree, cls.tmp)
        cls.data = os.path.join(cls.tmp, 'data')
        quiet = {'stdout': io.StringIO(), 'stderr': io.StringIO()}
        call_command('synth', '--out', cls.data, '--domains', '10', '--ood-domains', '5',
                     '--classes', '10', '--per-domain', '2000', '--seed', '2024',
                     '--embed-mode', 'direct', **quiet)
        for method in ('mdts', 'ts'):
            out = os.path.join(cls.tmp, method)
            call_command('fit', '--data', cls.data, '--out', out, '--method', method, **quiet)
            call_command('eval', '--data', cls.data, '--model', os.path.join(out, 'model.json'),
                         '--out', out, **quiet)
        call_command('predict_acc', '--data', cls.data,
                     '--model', os.path.join(cls.tmp, 'mdts', 'model.json'),
                     '--out', os.path.join(cls.tmp, 'acc'), **quiet)

    def result(self, *parts):
        return read_json(os.path.join(self.tmp, *parts))

    def test_temperature_recovery(self):
        """
        test every fitted T_k lies within 10% of its generating scale
        """
        ground_truth = self.result('data', GROUND_TRUTH_NAME)
        fitted = self.result('mdts', 'model.json')['per_domain_T']

        self.assertEqual(len(fitted), 10)
        for domain_id, T in fitted.items():
            self.assertLessEqual(abs(T - ground_truth[domain_id]), 0.1 * ground_truth[domain_id])

    def test_in_distribution_mdece(self):
        """
        test MD-TS at most halves the pooled-TS MDECE on held-out InD halves
        """
        self.assertLessEqual(self.result('mdts', 'report_ind.json')['mdece'],
                             0.5 * self.result('ts', 'report_ind.json')['mdece'])

    def test_out_of_distribution_mdece(self):
        """
        test MD-TS beats pooled TS on OOD domains and stays near the oracle floor
        """
        mdts_mdece = self.result('mdts', 'report_ood.json')['mdece']
        floor = oracle_multi_domain_report(load(self.data).select('ood'), 20).mdece

        self.assertLessEqual(mdts_mdece, 0.7 * self.result('ts', 'report_ood.json')['mdece'])
        self.assertLessEqual(mdts_mdece - floor, 0.03)

    def test_predicted_temperatures(self):
        """
        test the mean predicted temperature of each InD domain is within 10% of T_k
        """
        rows = read_rows(os.path.join(self.tmp, 'mdts', 'temperatures.csv'))

        ind_rows = [row for row in rows if row['scope'] == 'ind']
        self.assertEqual(len(ind_rows), 10)
        for row in ind_rows:
            fitted = float(row['fitted_T'])
            self.assertLessEqual(abs(float(row['mean_T']) - fitted), 0.1 * fitted)

    def test_accuracy_prediction(self):
        """
        test MD-TS predicts domain accuracy at least as well as pooled TS
        """
        mae = self.result('acc', 'predict_acc.json')['mae']

        for scope in ('ind', 'ood'):
            self.assertLessEqual(mae[scope]['mdts'], mae[scope]['ts'])

    def test_ablation(self):
        """
        test all five regressors complete and the smooth ones stay within 0.02 of OLS
        """
        out = os.path.join(self.tmp, 'ablate')
        call_command('ablate', '--data', self.data, '--out', out,
                     stdout=io.StringIO(), stderr=io.StringIO())

        rows = {row['regressor']: row for row in read_rows(os.path.join(out, 'ablation.csv'))}
        self.assertEqual(sorted(rows), ['huber', 'knn', 'krr', 'ols', 'ridge'])
        ols = float(rows['ols']['ind_mdece'])
        self.assertEqual(ols, self.result('mdts', 'report_ind.json')['mdece'])
        for kind in ('ridge', 'huber', 'krr'):
            self.assertLessEqual(abs(float(rows[kind]['ind_mdece']) - ols), 0.02)
        for row in rows.values():
            self.assertNotEqual(row['ood_mdece'], '')
