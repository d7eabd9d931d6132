from ..metrics.renderers import CSVRenderer


class AblationCSVRenderer(CSVRenderer):
    header = ('regressor', 'hyperparams', 'ind_mdece', 'ood_mdece')


class TemperatureCSVRenderer(CSVRenderer):
    header = ('domain', 'scope', 'fitted_T', 'mean_T', 'std_T', 'n')


class CompareTsCSVRenderer(CSVRenderer):
    header = ('domain', 'scope', 'ts_ece', 'model_ece')


class AccuracyCSVRenderer(CSVRenderer):
    """Predicted (mean confidence) against actual accuracy per domain.

    Calibrator columns vary, so the header comes from the renderer context.
    """
    header = ('domain', 'scope', 'acc')
