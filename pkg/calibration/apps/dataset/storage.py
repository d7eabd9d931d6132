"""On-disk format of multi-domain datasets.

A dataset directory holds ``manifest.json`` plus one CSV file per domain::

    label,logit_0,...,logit_{J-1},emb_0,...,emb_{p-1}[,oracle_conf]

Floats are written with 17 significant digits, so a save/load round trip
reproduces every double exactly. Rows are reported 1-based, counting data
rows only (the header is not a row).
"""
import csv
import io
import logging
import math
import os

import numpy as np
from django.utils.text import slugify
from rest_framework.exceptions import ValidationError

from ..core.exceptions import (
    IoFailure, LabelOutOfRange, MissingFile, NonFiniteValue, SchemaViolation)
from ..core.utils import format_float, read_json, write_atomic, write_json
from .models import DomainDataset, MultiDomainDataset
from .serializers import MANIFEST_VERSION, GroundTruthSerializer, ManifestSerializer

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.json'
GROUND_TRUTH_NAME = 'ground_truth.json'
ORACLE_COLUMN = 'oracle_conf'


def expected_header(num_classes, embedding_dim, with_oracle):
    header = ['label']
    header += ['logit_%d' % j for j in range(num_classes)]
    header += ['emb_%d' % j for j in range(embedding_dim)]
    if with_oracle:
        header.append(ORACLE_COLUMN)
    return header


def load(manifest_path):
    """Read and validate a dataset directory from its manifest path.

    ``manifest_path`` may also be the directory itself.
    """
    if os.path.isdir(manifest_path):
        manifest_path = os.path.join(manifest_path, MANIFEST_NAME)
    manifest = read_json(manifest_path)

    serializer = ManifestSerializer(data=manifest)
    try:
        serializer.is_valid(raise_exception=True)
    except ValidationError as error:
        raise SchemaViolation({'file': str(manifest_path), 'errors': error.detail})
    manifest = serializer.validated_data

    root = os.path.dirname(os.path.abspath(manifest_path))
    domains = []
    for entry in manifest['domains']:
        path = os.path.join(root, entry['file'])
        domain = _read_domain_file(
            path, entry, manifest['num_classes'], manifest['embedding_dim'])
        domains.append(domain)

    dataset = MultiDomainDataset(
        num_classes=manifest['num_classes'],
        embedding_dim=manifest['embedding_dim'],
        domains=tuple(domains))
    logger.info('loaded %d domains from %s', len(dataset), manifest_path)
    return dataset


def save(dataset, directory):
    """Write ``dataset`` under ``directory``; returns the manifest path."""
    if os.path.exists(directory) and not os.path.isdir(directory):
        raise IoFailure({'path': str(directory), 'message': 'not a directory'})
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as error:
        raise IoFailure({'path': str(directory), 'message': str(error)})

    entries = []
    for index, domain in enumerate(dataset.domains):
        file_name = 'domain_%03d_%s.csv' % (index, slugify(domain.id) or 'domain')
        write_atomic(os.path.join(directory, file_name), _render_domain(domain))
        entries.append({
            'id': domain.id,
            'file': file_name,
            'split': domain.split_tag,
            'n': domain.n,
        })

    manifest_path = os.path.join(directory, MANIFEST_NAME)
    write_json(manifest_path, {
        'version': MANIFEST_VERSION,
        'num_classes': dataset.num_classes,
        'embedding_dim': dataset.embedding_dim,
        'domains': entries,
    })
    logger.info('saved %d domains to %s', len(dataset), directory)
    return manifest_path


def save_ground_truth(ground_truth, directory):
    path = os.path.join(directory, GROUND_TRUTH_NAME)
    return write_json(path, GroundTruthSerializer(ground_truth).data)


def load_ground_truth(directory):
    serializer = GroundTruthSerializer(
        data=read_json(os.path.join(directory, GROUND_TRUTH_NAME)))
    try:
        serializer.is_valid(raise_exception=True)
    except ValidationError as error:
        raise SchemaViolation({'file': GROUND_TRUTH_NAME, 'errors': error.detail})
    return dict(serializer.validated_data)


def _render_domain(domain):
    with_oracle = domain.has_oracle
    stream = io.StringIO()
    writer = csv.writer(stream, lineterminator='\n', quoting=csv.QUOTE_NONE)
    writer.writerow(expected_header(domain.num_classes, domain.embedding_dim, with_oracle))
    for i in range(domain.n):
        row = [str(int(domain.labels[i]))]
        row += [format_float(value) for value in domain.logits[i]]
        row += [format_float(value) for value in domain.embeddings[i]]
        if with_oracle:
            row.append(format_float(domain.oracle_conf[i]))
        writer.writerow(row)
    return stream.getvalue()


def _read_domain_file(path, entry, num_classes, embedding_dim):
    if not os.path.isfile(path):
        raise MissingFile({'file': str(path), 'domain': entry['id']})
    try:
        with open(path, newline='', encoding='utf-8') as stream:
            rows = list(csv.reader(stream))
    except (OSError, UnicodeDecodeError) as error:
        raise IoFailure({'file': str(path), 'message': str(error)})

    if not rows:
        raise SchemaViolation({'file': str(path), 'row': 0, 'message': 'missing header'})
    header = rows[0]
    with_oracle = bool(header) and header[-1] == ORACLE_COLUMN
    if header != expected_header(num_classes, embedding_dim, with_oracle):
        raise SchemaViolation({
            'file': str(path), 'row': 0,
            'message': 'header does not match num_classes={} embedding_dim={}'.format(
                num_classes, embedding_dim)})

    data_rows = [row for row in rows[1:] if row]
    if len(data_rows) != entry['n']:
        raise SchemaViolation({
            'file': str(path),
            'message': 'manifest declares n={} but the file has {} rows'.format(
                entry['n'], len(data_rows))})

    width = len(header)
    n = len(data_rows)
    labels = np.empty(n, dtype=np.int64)
    logits = np.empty((n, num_classes))
    embeddings = np.empty((n, embedding_dim))
    oracle = np.empty(n) if with_oracle else None

    for index, row in enumerate(data_rows):
        row_number = index + 1
        if len(row) != width:
            raise SchemaViolation({
                'file': str(path), 'row': row_number,
                'message': 'expected {} fields, found {}'.format(width, len(row))})
        labels[index] = _parse_label(row[0], path, row_number, num_classes)
        values = [_parse_float(token, path, row_number) for token in row[1:]]
        logits[index] = values[:num_classes]
        embeddings[index] = values[num_classes:num_classes + embedding_dim]
        if with_oracle:
            oracle[index] = values[-1]
            if not 1.0 / num_classes - 1e-12 <= oracle[index] <= 1.0 + 1e-12:
                raise SchemaViolation({
                    'file': str(path), 'row': row_number,
                    'message': 'oracle_conf must lie in [1/J, 1]'})

    return DomainDataset(
        id=entry['id'], labels=labels, logits=logits, embeddings=embeddings,
        oracle_conf=oracle, split_tag=entry['split'])


def _parse_label(token, path, row_number, num_classes):
    try:
        label = int(token.strip())
    except ValueError:
        raise SchemaViolation({
            'file': str(path), 'row': row_number,
            'message': 'label {!r} is not an integer'.format(token)})
    if not 0 <= label < num_classes:
        raise LabelOutOfRange({
            'file': str(path), 'row': row_number,
            'label': label, 'num_classes': num_classes})
    return label


def _parse_float(token, path, row_number):
    try:
        value = float(token)
    except ValueError:
        raise SchemaViolation({
            'file': str(path), 'row': row_number,
            'message': 'value {!r} is not a number'.format(token)})
    if not math.isfinite(value):
        raise NonFiniteValue({'file': str(path), 'row': row_number, 'value': token})
    return value
