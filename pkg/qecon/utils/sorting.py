import re

__all__ = ['natural_sort', 'rank_descending']


def _atoi(text):
    return int(text) if text.isdigit() else text


def natural_sort(text):
    """Sort key that orders ``t_2`` before ``t_10``."""
    return [_atoi(a) for a in re.split(r'(\d+)', text)]


def rank_descending(names, values):
    """Order `names` by descending `values`, ties by natural name order."""
    pairs = sorted(zip(names, values),
                   key=lambda pair: (-pair[1], natural_sort(pair[0])))
    return [name for name, _ in pairs]
