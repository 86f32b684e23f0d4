//! The terminal period-`(2N+1)` schedule.

use crate::error::ProtocolError;
use crate::model::Choice;

/// Choice of the agent holding `id` on cyclic day `day_offset` (1-based,
/// counted from the day after the last ID was fixed).
///
/// ID 0 always picks A. ID `r >= 1` picks A only when
/// `day_offset ≡ 2r - 1 (mod 2N+1)`.
pub fn cyclic_choice(id: u64, day_offset: u64, n_big: u64) -> Result<Choice, ProtocolError> {
    if id > n_big + 1 {
        return Err(ProtocolError::InvalidId { id, n_big });
    }
    if day_offset == 0 {
        return Err(ProtocolError::InvalidDayOffset);
    }
    if id == 0 {
        return Ok(Choice::A);
    }
    let period = 2 * n_big + 1;
    Ok(if day_offset % period == (2 * id - 1) % period { Choice::A } else { Choice::B })
}

/// Attendance at A on a cyclic day: `N + 1` on offsets `1, 3, ..., 2N+1`
/// (mod `2N+1`), `N` otherwise.
pub fn cyclic_attendance_a(day_offset: u64, n_big: u64) -> u64 {
    let period = 2 * n_big + 1;
    let d = day_offset % period;
    // odd residues and 0 (= 2N+1) host one nonzero-ID agent
    if d % 2 == 1 || d == 0 {
        n_big + 1
    } else {
        n_big
    }
}
