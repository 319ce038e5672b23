__all__ = ['HOURS_PER_STAFF_DAY', 'staff_days_to_hours',
           'hours_to_staff_days']

HOURS_PER_STAFF_DAY = 8.0


def staff_days_to_hours(days):
    """Convert an effort in staff-days to person-hours (8 h per day).

    Parameters
    ----------
    days : float or np.ndarray
        Effort in staff-days.

    Returns
    -------
    float or np.ndarray
        Effort in person-hours, the canonical unit of qecon.

    """
    return days * HOURS_PER_STAFF_DAY


def hours_to_staff_days(hours):
    """Convert an effort in person-hours to staff-days."""
    return hours / HOURS_PER_STAFF_DAY
