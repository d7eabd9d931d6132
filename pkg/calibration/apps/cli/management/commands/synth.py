from ...base import CalibrationCommand
from ...utils import real_pair
from ....dataset.storage import save, save_ground_truth
from ....synth.models import EMBED_MODES, SynthConfig
from ....synth.utils import generate


class Command(CalibrationCommand):
    help = 'Generate a synthetic multi-domain dataset with known temperatures.'
    common = ('out', 'seed')

    def add_command_arguments(self, parser):
        parser.add_argument('--domains', type=int, required=True, metavar='K')
        parser.add_argument('--ood-domains', type=int, default=0, metavar='K')
        parser.add_argument('--classes', type=int, required=True, metavar='J')
        parser.add_argument('--per-domain', type=int, required=True, metavar='N')
        parser.add_argument('--logit-scale', type=float)
        parser.add_argument('--c-range', type=real_pair, metavar='LO,HI')
        parser.add_argument('--embed-mode', choices=EMBED_MODES)
        parser.add_argument('--embed-noise', type=float)
        parser.add_argument('--mix-dim', type=int)

    def run(self, options):
        config = SynthConfig(
            K=options['domains'], J=options['classes'], n_k=options['per_domain'],
            logit_scale=options['logit_scale'], c_range=options['c_range'],
            embed_mode=options['embed_mode'], embed_noise=options['embed_noise'],
            mix_dim=options['mix_dim'], seed=options['seed'], K_ood=options['ood_domains'])
        dataset, ground_truth = generate(config)

        manifest = save(dataset, options['out'])
        save_ground_truth(ground_truth, options['out'])

        for domain in dataset:
            self.stdout.write('%s\t%s\tn=%d\tc=%.6f' % (
                domain.id, domain.split_tag, domain.n, ground_truth[domain.id]))
        self.success('Wrote %d domains to %s' % (len(dataset), manifest))
