import logging

from braid import BraidParseError, closure, parse
from checks import MarkovCheck, UnknotCheck
from homfly import framed_homflypt, homflypt
from ideal import GroebnerIncomplete, numeric_oracle
from ngalg import augmentation_ideal, relations
from report import render, steps_frame, to_records, validate_oracle

logger = logging.getLogger(__name__)


def _braid(cfg):
    return parse(cfg.braid, cfg.strands)


def _usage(e):
    logger.error(f"Invalid braid: {str(e)}")
    return {'status': 'usage', 'text': f"error: {str(e)}", 'data': {'error': str(e)}}


def cmd_present(cfg):
    """
    Relation generators of the closure of the configured braid.

    Args:
        cfg (RunConfig): Command settings

    Returns:
        dict: 'status', 'text' and JSON-ready 'data'
    """
    try:
        b = _braid(cfg)
    except BraidParseError as e:
        return _usage(e)
    pres = relations(b, cfg.lambda_sign)
    info = pres.info
    lines = [f"braid: {b} on {b.n} strands, {info.r} component(s), writhe {info.wr_total}",
             f"variables: {', '.join(pres.table.names)}"]
    lines += [f"{label}: {p}" for label, p in zip(pres.labels, pres.generators)]
    return {'status': 'passed', 'text': '\n'.join(lines), 'data': pres.to_dict(), 'presentation': pres}


def cmd_augpoly(cfg):
    """
    Eliminate the a_ij from the relations; optionally cross-check the result
    with the numeric oracle when ``cfg.oracle_trials`` is positive.
    """
    try:
        b = _braid(cfg)
    except BraidParseError as e:
        return _usage(e)
    try:
        pres, ideal = augmentation_ideal(b, cfg.lambda_sign, **cfg.limits())
    except GroebnerIncomplete as e:
        logger.error(f"Elimination incomplete for {b}: {str(e)}")
        return {'status': 'incomplete', 'text': f"incomplete: {str(e)}",
                'data': {'status': 'incomplete', 'error': str(e), 'pairs': e.pairs}}

    status = 'passed'
    lines = [f"augmentation ideal of {b} ({len(ideal)} generators):"]
    lines += [f"  {p}" for p in ideal.generators]
    data = ideal.to_dict()
    if cfg.oracle_trials:
        frame = numeric_oracle(pres, ideal, trials=cfg.oracle_trials, seed=cfg.seed)
        check = validate_oracle(frame)
        if not check['valid']:
            status = 'failed'
        lines.append(render(frame))
        lines.append(f"oracle: {check['converged']}/{check['trials']} converged, pass rate {check['pass_rate']:.2f}")
        data['oracle'] = {'summary': check, 'trials': to_records(frame)}
    return {'status': status, 'text': '\n'.join(lines), 'data': data, 'ideal': ideal}


def cmd_verify_unknot(cfg):
    """Run the unknot chain and report each step."""
    result = UnknotCheck(cfg).run()
    frame = steps_frame(result['steps'])
    text = render(frame) + f"\nunknot chain: {result['status']}"
    return {'status': result['status'], 'text': text, 'data': result['task']}


def cmd_homfly(cfg, framed=False):
    """HOMFLYPT polynomial of the closure, unframed unless ``framed``."""
    try:
        b = _braid(cfg)
    except BraidParseError as e:
        return _usage(e)
    value = framed_homflypt(b) if framed else homflypt(b)
    data = {'braid': b.to_dict(), 'framed': framed, 'value': value.to_dict(), 'text': str(value)}
    return {'status': 'passed', 'text': str(value), 'data': data, 'value': value}


def cmd_markov(cfg, against=None):
    """
    Compare the augmentation ideal with conjugated and stabilized words,
    and with ``against`` as a control expected to differ.
    """
    try:
        b = _braid(cfg)
        control = parse(against) if against else None
    except BraidParseError as e:
        return _usage(e)
    if control is not None and closure(control).r != closure(b).r:
        logger.warning(f"Control {control} has a different number of components than {b}")
    result = MarkovCheck(cfg).run(b, control=control)
    if result['status'] == 'incomplete':
        return {'status': 'incomplete', 'text': f"incomplete: {result['error']}", 'data': result['task']}
    text = render(result['frame']) + f"\nmarkov test: {result['status']}"
    data = {'base': result['base'], 'rows': result['rows'], 'task': result['task']}
    return {'status': result['status'], 'text': text, 'data': data}
