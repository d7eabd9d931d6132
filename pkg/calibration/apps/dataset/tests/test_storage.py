"""Test the manifest + CSV dataset format"""
import json
import os
import shutil
import tempfile

import numpy as np
from rest_framework.test import APISimpleTestCase

from ...core.exceptions import (
    IoFailure, LabelOutOfRange, MissingFile, NonFiniteValue, SchemaViolation)
from ..models import DomainDataset, MultiDomainDataset
from ..storage import load, load_ground_truth, save, save_ground_truth


class StorageTest(APISimpleTestCase):
    """ Class contains methods testing dataset load and save."""

    def setUp(self):
        self.directory = tempfile.mkdtemp()
        rng = np.random.default_rng(3)
        self.dataset = MultiDomainDataset(
            num_classes=3, embedding_dim=4, domains=(
                DomainDataset(
                    id='first', labels=rng.integers(0, 3, 6),
                    logits=rng.normal(size=(6, 3)),
                    embeddings=rng.normal(size=(6, 4))),
                DomainDataset(
                    id='second domain', labels=rng.integers(0, 3, 5),
                    logits=rng.normal(size=(5, 3)) * 1e-7,
                    embeddings=rng.normal(size=(5, 4)) * 1e5,
                    split_tag='ood'),
            ))

    def tearDown(self):
        shutil.rmtree(self.directory, ignore_errors=True)

    def write_domain(self, text, n, num_classes=3, embedding_dim=4):
        with open(os.path.join(self.directory, 'd.csv'), 'w') as stream:
            stream.write(text)
        manifest = {
            'version': 1, 'num_classes': num_classes,
            'embedding_dim': embedding_dim,
            'domains': [{'id': 'd', 'file': 'd.csv', 'split': 'ind', 'n': n}],
        }
        path = os.path.join(self.directory, 'manifest.json')
        with open(path, 'w') as stream:
            json.dump(manifest, stream)
        return path

    def test_round_trip(self):
        """
        test save then load reproduces every field
        """
        manifest_path = save(self.dataset, self.directory)
        loaded = load(manifest_path)

        self.assertEqual(loaded.ids, ['first', 'second domain'])
        self.assertEqual(loaded.num_classes, 3)
        self.assertEqual(loaded.embedding_dim, 4)
        for before, after in zip(self.dataset, loaded):
            self.assertEqual(before.split_tag, after.split_tag)
            np.testing.assert_array_equal(before.labels, after.labels)
            np.testing.assert_allclose(after.logits, before.logits, rtol=1e-12)
            np.testing.assert_allclose(after.embeddings, before.embeddings, rtol=1e-12)
            self.assertFalse(after.has_oracle)

    def test_round_trip_with_oracle(self):
        """
        test the optional oracle_conf column survives a round trip
        """
        domain = DomainDataset(
            id='synthetic', labels=[0, 1], logits=[[1.0, 0.0], [0.0, 2.0]],
            embeddings=[[0.5], [1.5]], oracle_conf=[0.7310585786300049, 0.9])
        dataset = MultiDomainDataset(num_classes=2, embedding_dim=1, domains=(domain,))

        loaded = load(save(dataset, self.directory))

        np.testing.assert_array_equal(loaded.get('synthetic').oracle_conf, domain.oracle_conf)

    def test_load_directory_path(self):
        """
        test load accepts the dataset directory as well as the manifest
        """
        save(self.dataset, self.directory)

        self.assertEqual(len(load(self.directory)), 2)

    def test_csv_layout(self):
        """
        test the header and line endings of a written domain file
        """
        save(self.dataset, self.directory)
        with open(os.path.join(self.directory, 'domain_000_first.csv'), 'rb') as stream:
            content = stream.read()

        self.assertTrue(content.startswith(
            b'label,logit_0,logit_1,logit_2,emb_0,emb_1,emb_2,emb_3\n'))
        self.assertNotIn(b'\r', content)
        self.assertEqual(content.count(b'\n'), 7)

    def test_save_to_unwritable_path(self):
        """
        test saving below a regular file raises IoFailure
        """
        blocker = os.path.join(self.directory, 'blocker')
        with open(blocker, 'w') as stream:
            stream.write('x')

        with self.assertRaises(IoFailure):
            save(self.dataset, os.path.join(blocker, 'out'))

    def test_missing_manifest(self):
        """
        test loading a manifest that does not exist
        """
        with self.assertRaises(MissingFile):
            load(os.path.join(self.directory, 'manifest.json'))

    def test_missing_domain_file(self):
        """
        test a manifest pointing at an absent domain file
        """
        path = self.write_domain('', 1)
        os.remove(os.path.join(self.directory, 'd.csv'))

        with self.assertRaises(MissingFile):
            load(path)

    def test_label_out_of_range(self):
        """
        test a label equal to num_classes names its row
        """
        path = self.write_domain(
            'label,logit_0,logit_1,logit_2,emb_0,emb_1,emb_2,emb_3\n'
            '0,1,2,3,0,0,0,0\n'
            '3,1,2,3,0,0,0,0\n', 2)

        with self.assertRaises(LabelOutOfRange) as error:
            load(path)

        self.assertEqual(str(error.exception.detail['row']), '2')
        self.assertIn('d.csv', str(error.exception.detail['file']))

    def test_non_numeric_logit(self):
        """
        test a malformed logit token names its row
        """
        path = self.write_domain(
            'label,logit_0,logit_1,logit_2,emb_0,emb_1,emb_2,emb_3\n'
            '0,1,abc,3,0,0,0,0\n', 1)

        with self.assertRaises(SchemaViolation) as error:
            load(path)

        self.assertEqual(str(error.exception.detail['row']), '1')

    def test_non_finite_logit(self):
        """
        test nan and inf tokens are rejected
        """
        path = self.write_domain(
            'label,logit_0,logit_1,logit_2,emb_0,emb_1,emb_2,emb_3\n'
            '0,1,2,3,0,0,0,0\n'
            '0,1,inf,3,0,0,0,0\n', 2)

        with self.assertRaises(NonFiniteValue) as error:
            load(path)

        self.assertEqual(str(error.exception.detail['row']), '2')

    def test_field_count_mismatch(self):
        """
        test a short row is a schema violation
        """
        path = self.write_domain(
            'label,logit_0,logit_1,logit_2,emb_0,emb_1,emb_2,emb_3\n'
            '0,1,2,3,0,0,0\n', 1)

        with self.assertRaises(SchemaViolation):
            load(path)

    def test_header_mismatch(self):
        """
        test a header that disagrees with the manifest dimensions
        """
        path = self.write_domain(
            'label,logit_0,logit_1,emb_0,emb_1,emb_2,emb_3\n'
            '0,1,2,0,0,0,0\n', 1)

        with self.assertRaises(SchemaViolation):
            load(path)

    def test_row_count_mismatch(self):
        """
        test the declared n must match the file
        """
        path = self.write_domain(
            'label,logit_0,logit_1,logit_2,emb_0,emb_1,emb_2,emb_3\n'
            '0,1,2,3,0,0,0,0\n', 2)

        with self.assertRaises(SchemaViolation):
            load(path)

    def test_invalid_manifest(self):
        """
        test manifest validation errors become schema violations
        """
        path = os.path.join(self.directory, 'manifest.json')
        with open(path, 'w') as stream:
            json.dump({'version': 2, 'num_classes': 3, 'embedding_dim': 4,
                       'domains': []}, stream)

        with self.assertRaises(SchemaViolation) as error:
            load(path)

        self.assertIn('version', str(error.exception.detail))

    def test_malformed_json(self):
        """
        test a manifest that is not JSON
        """
        path = os.path.join(self.directory, 'manifest.json')
        with open(path, 'w') as stream:
            stream.write('{not json')

        with self.assertRaises(SchemaViolation):
            load(path)

    def test_ground_truth_round_trip(self):
        """
        test ground_truth.json stores domain temperatures
        """
        save_ground_truth({'ind-00': 1.25, 'ood-00': 2.5}, self.directory)

        self.assertEqual(load_ground_truth(self.directory),
                         {'ind-00': 1.25, 'ood-00': 2.5})
