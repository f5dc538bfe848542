import logging
import time

from braid import conjugate, stabilize
from ideal import GroebnerIncomplete, ideal_equal
from models import CheckTask
from ngalg import augmentation_ideal
from report import markov_frame

logger = logging.getLogger(__name__)


def default_variants(b):
    """
    Three conjugations (by single generators first, then by squares) plus
    one positive and one negative stabilization.
    """
    words = [[sign * k] for k in range(1, b.n) for sign in (1, -1)]
    words += [[k, k] for k in range(1, b.n)]
    variants = [(f"conjugate by {' '.join(map(str, w))}", conjugate(b, w)) for w in words[:3]]
    variants.append(('stabilize +', stabilize(b, 1)))
    variants.append(('stabilize -', stabilize(b, -1)))
    return variants


class MarkovCheck:
    """
    Compares the eliminated augmentation ideal of a braid closure with the
    ones of Markov-equivalent words, and optionally with a control braid
    expected to give a different ideal.
    """

    def __init__(self, config):
        self.config = config
        self.task = CheckTask('markov_test')
        self._cache = {}

    def ideal_of(self, b):
        key = (b.n, b.letters)
        if key not in self._cache:
            _, self._cache[key] = augmentation_ideal(b, self.config.lambda_sign, **self.config.limits())
        return self._cache[key]

    def run(self, b, variants=None, control=None):
        """
        Args:
            b (BraidWord): Base braid
            variants (list, optional): (label, BraidWord) pairs expected to match
            control (BraidWord, optional): Braid expected to differ

        Returns:
            dict: 'status', the comparison rows and the task record
        """
        self.task.status = 'running'
        variants = list(variants) if variants is not None else default_variants(b)
        comparisons = [(label, w, True) for label, w in variants]
        if control is not None:
            comparisons.append(('control', control, False))
        rows = []
        try:
            base = self.ideal_of(b)
            logger.info(f"Base ideal for {b}: {len(base)} generators")
            for i, (label, w, expected) in enumerate(comparisons):
                start = time.monotonic()
                other = self.ideal_of(w)
                equal = ideal_equal(base, other, **self.config.limits())
                rows.append({'variant': label, 'word': str(w), 'strands': w.n,
                             'generators': len(other), 'equal': equal, 'expected': expected})
                self.task.record(label, equal == expected, str(w), time.monotonic() - start)
                self.task.progress = int((i + 1) / len(comparisons) * 100)
        except GroebnerIncomplete as e:
            logger.error(f"Markov check stopped: {str(e)}")
            self.task.status = 'incomplete'
            self.task.error_message = str(e)
            return {'status': 'incomplete', 'error': str(e), 'rows': rows, 'task': self.task.to_dict()}

        frame = markov_frame(rows)
        self.task.status = 'passed' if (frame['status'] == 'passed').all() else 'failed'
        return {'status': self.task.status, 'rows': rows, 'frame': frame,
                'base': [str(p) for p in base.generators], 'task': self.task.to_dict()}
