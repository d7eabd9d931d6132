import argparse
import logging

from ..baselines.serializers import HistogramBinningModelSerializer, IsotonicModelSerializer
from ..core.exceptions import ModelMismatch, SchemaViolation
from ..core.utils import read_json, write_atomic, write_json
from ..dataset.storage import load
from ..dataset.utils import split_half
from ..mdts.serializers import MdtsModelSerializer
from ..probcore.utils import MspCalibrator
from ..ts.serializers import TemperatureModelSerializer
from .models import MSP_MODEL

logger = logging.getLogger(__name__)

CALIBRATOR_SERIALIZERS = {
    'ts': TemperatureModelSerializer,
    'mdts': MdtsModelSerializer,
    'histbin': HistogramBinningModelSerializer,
    'isotonic': IsotonicModelSerializer,
}


def real_pair(text):
    """argparse type for ``LO,HI``."""
    try:
        low, high = (float(part) for part in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError('expected two numbers as LO,HI, got %r' % text)
    return low, high


def real_list(text):
    try:
        return [float(part) for part in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma-separated numbers, got %r' % text)


def load_splits(path, split_seed):
    """(InD calibration halves, InD evaluation halves, OOD domains or None)."""
    dataset = load(path)
    halves = split_half(dataset.select('ind'), split_seed)
    ood = dataset.select('ood') if dataset.has_split('ood') else None
    return dataset, halves.calibration, halves.evaluation, ood


def read_calibrator(path, dataset=None):
    """Load a calibrator file of any type, or the msp baseline for ``msp``."""
    if path == MSP_MODEL:
        return MspCalibrator()
    data = read_json(path)
    kind = data.get('type') if isinstance(data, dict) else None
    if kind not in CALIBRATOR_SERIALIZERS:
        raise SchemaViolation({
            'path': path,
            'type': 'expected one of %s' % ', '.join(sorted(CALIBRATOR_SERIALIZERS))})

    serializer = CALIBRATOR_SERIALIZERS[kind](data=data)
    if not serializer.is_valid():
        raise SchemaViolation({'path': path, 'errors': serializer.errors})
    calibrator = serializer.save()
    if dataset is not None:
        check_compatible(calibrator, dataset)
    logger.info('loaded %s calibrator from %s', kind, path)
    return calibrator


def check_compatible(calibrator, dataset):
    if calibrator.kind != 'mdts':
        return
    if (calibrator.num_classes != dataset.num_classes
            or calibrator.embedding_dim != dataset.embedding_dim):
        raise ModelMismatch({
            'model': {'num_classes': calibrator.num_classes,
                      'embedding_dim': calibrator.embedding_dim},
            'dataset': {'num_classes': dataset.num_classes,
                        'embedding_dim': dataset.embedding_dim}})


def write_calibrator(calibrator, path):
    return write_json(path, CALIBRATOR_SERIALIZERS[calibrator.kind](calibrator).data)


def write_csv(path, rows, renderer_class, header=None):
    context = {'header': header} if header is not None else None
    write_atomic(path, renderer_class().render(rows, renderer_context=context))
    logger.info('wrote %s', path)
    return path
