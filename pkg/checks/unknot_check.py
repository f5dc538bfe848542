import logging
import time

from braid import BraidWord, closure, stabilize
from checks.markov_check import MarkovCheck
from homfly import colored_unknot
from ideal import ideal_equal, ideal_from
from models import CheckTask
from ngalg import D_beta, D_matrix, aug_table, phi_matrices, psi, relation_matrices
from qtorus import annihilates, classical_limit, unknot_operator

logger = logging.getLogger(__name__)

TREFOIL = BraidWord(2, (1, 1, 1))


class UnknotCheck:
    """
    Runs the unknot chain: operator, annihilation of the colored unknot,
    classical limit, agreement with the unknot relation, invariance of the
    unknot ideal under both stabilizations, and the Psi rescaling property
    on the trefoil.
    """

    def __init__(self, config):
        """
        Args:
            config (RunConfig): Convention switches and resource limits
        """
        self.config = config
        self.task = CheckTask('verify_unknot')

    def run(self, k_range=range(1, 9), n_range=range(3, 7)):
        """
        Execute every step, continuing after failures.

        Returns:
            dict: 'status' ('passed', 'failed' or 'incomplete'), the steps and the task record
        """
        self.task.status = 'running'
        steps = [
            ('operator', self._operator),
            ('annihilation', lambda: self._annihilation(k_range, n_range)),
            ('classical_limit', self._classical_limit),
            ('ideal_match', self._ideal_match),
            ('stabilization', self._stabilization),
            ('psi_conjugation', self._psi_conjugation),
        ]
        self.operator = None
        for i, (name, fn) in enumerate(steps):
            start = time.monotonic()
            try:
                ok, detail = fn()
            except Exception as e:
                logger.error(f"Error in step {name}: {str(e)}")
                ok, detail = False, f"error: {str(e)}"
            self.task.record(name, ok, detail, time.monotonic() - start)
            self.task.progress = int((i + 1) / len(steps) * 100)

        self.task.status = 'passed' if self.task.passed() else 'failed'
        return {'status': self.task.status, 'steps': self.task.steps, 'task': self.task.to_dict()}

    def _operator(self):
        self.operator = unknot_operator(self.config.torus_sign)
        return True, str(self.operator)

    def _annihilation(self, k_range, n_range):
        report = annihilates(self.operator, colored_unknot(), k_range, n_range)
        detail = f"{report.checked} points, {len(report.failures)} nonzero"
        return report.passed, detail

    def _classical_limit(self):
        limit = classical_limit(self.operator)
        table = limit.table
        nu, lam, g = table.var('nu'), table.var('L'), table.var('g')
        expected = nu - nu ** -1 - g * nu ** -1 * lam + g ** -1 * nu * lam
        self.limit = limit
        return limit == expected, str(limit)

    def _ideal_match(self):
        """(unknot relation) * (-nu^2 L) == (classical limit) * nu, and equal ideals."""
        mats = relation_matrices(BraidWord(1, ()), self.config.lambda_sign)
        relation = mats['ourCH2'][0, 0]
        table = relation.table
        limit = self.limit.embed(table)
        nu, lam = table.var('nu'), table.var('L')
        identity = relation * (-(nu ** 2) * lam) == limit * nu
        same = ideal_equal(ideal_from([relation]), ideal_from([limit]), **self.config.limits())
        return identity and same, f"relation {relation}"

    def _stabilization(self):
        unknot = BraidWord(1, ())
        variants = [(f"stabilize {sign:+d}", stabilize(unknot, sign)) for sign in (1, -1)]
        result = MarkovCheck(self.config).run(unknot, variants=variants)
        if result['status'] == 'incomplete':
            return False, result['error']
        mismatched = [row['word'] for row in result['rows'] if not row['equal']]
        return not mismatched, f"mismatched: {mismatched}" if mismatched else "sigma_1 and sigma_1^-1 agree"

    def _psi_conjugation(self):
        info = closure(TREFOIL)
        table = aug_table(TREFOIL.n, info.r)
        left, right, _ = phi_matrices(TREFOIL, table)
        rescale = psi(info, table, self.config.psi_sign)
        D = D_matrix(info, table)
        Db = D_beta(info, table)
        D_inv = D.apply(lambda x: x.invert_monomial() if x else x)
        Db_inv = Db.apply(lambda x: x.invert_monomial() if x else x)
        ok_left = rescale(left) == Db @ left @ D_inv
        ok_right = rescale(right) == D @ right @ Db_inv
        return ok_left and ok_right, f"Phi^L {'ok' if ok_left else 'mismatch'}, Phi^R {'ok' if ok_right else 'mismatch'}"
