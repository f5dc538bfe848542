import logging

import pandas as pd

logger = logging.getLogger(__name__)


def steps_frame(steps):
    """
    Tabulate check steps.

    Args:
        steps (list): Dicts with 'step', 'status', 'detail' and 'seconds'

    Returns:
        pandas.DataFrame: One row per step
    """
    return pd.DataFrame(steps, columns=['step', 'status', 'detail', 'seconds'])


def validate_oracle(df, min_rate=0.9, min_converged=0.9):
    """
    Validate a numeric-oracle frame.

    Args:
        df (pandas.DataFrame): Output of ideal.numeric_oracle
        min_rate (float): Required share of converged trials that pass
        min_converged (float): Required share of all trials that converge

    Returns:
        dict: Validation result with 'valid' (bool), 'errors' (list) and summary numbers
    """
    errors = []
    required_columns = ['trial', 'converged', 'max_residual', 'passed']
    missing_columns = [col for col in required_columns if col not in df.columns]
    if missing_columns:
        errors.append(f"Missing required columns: {', '.join(missing_columns)}")
        return {'valid': False, 'errors': errors}

    converged = df[df['converged']]
    skipped = len(df) - len(converged)
    if skipped:
        errors.append(f"WARNING: {skipped} trials did not converge: {df.index[~df['converged']].tolist()}")
    if len(df) and len(converged) / len(df) < min_converged:
        errors.append(f"Only {len(converged)} of {len(df)} trials converged")
    if converged.empty:
        errors.append("No trial converged")
        rate = 0.0
    else:
        rate = float(converged['passed'].mean())
        if rate < min_rate:
            failing = converged.index[~converged['passed']].tolist()
            errors.append(f"Residual above tolerance at trials: {failing}")

    return {
        'valid': len([e for e in errors if not e.startswith('WARNING:')]) == 0,
        'errors': errors,
        'trials': len(df),
        'converged': len(converged),
        'pass_rate': rate,
        'max_residual': float(converged['max_residual'].max()) if not converged.empty else None,
    }


def markov_frame(rows):
    """Ideal-equality comparisons, one row per braid variant."""
    df = pd.DataFrame(rows, columns=['variant', 'word', 'strands', 'generators', 'equal', 'expected'])
    df['status'] = (df['equal'] == df['expected']).map({True: 'passed', False: 'failed'})
    return df


def render(df):
    """Plain-text table for terminal output."""
    if df.empty:
        return "(no rows)"
    return df.to_string(index=False)


def to_records(df):
    """JSON-ready records; NaN becomes None."""
    return df.astype(object).where(pd.notna(df), None).to_dict(orient='records')
