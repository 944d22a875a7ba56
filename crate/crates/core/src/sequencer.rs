//! Time-division beamstate schedule for a single RF chain.
//!
//! Slots are half-open `[start, end)`: a timestamp on a boundary belongs to
//! the later slot.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::excitation::{port_vector, BeamState, ExcitationMatrix, MappingKind, PortMapping};

/// Relative snapping tolerance for timestamps that land on a slot boundary.
const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SlotSchedule {
    slots: Vec<(BeamState, f64)>,
    mapping: PortMapping,
    /// Cumulative slot end times, ms.
    ends: Vec<f64>,
}

impl SlotSchedule {
    /// Cyclic schedule with one `slot_ms` slot per state, in order.
    pub fn new(states: &[BeamState], slot_ms: f64, mapping: PortMapping) -> Result<Self> {
        Self::from_slots(states.iter().map(|&s| (s, slot_ms)).collect(), mapping)
    }

    pub fn from_slots(slots: Vec<(BeamState, f64)>, mapping: PortMapping) -> Result<Self> {
        if slots.is_empty() {
            return domain("schedule needs at least one state");
        }
        if let Some((s, d)) = slots.iter().find(|(_, d)| !(*d > 0.0) || !d.is_finite()) {
            return domain(format!("slot for state {s} has non-positive duration {d} ms"));
        }
        let ends = slots
            .iter()
            .scan(0.0, |t, &(_, d)| {
                *t += d;
                Some(*t)
            })
            .collect();
        Ok(Self { slots, mapping, ends })
    }

    pub fn slots(&self) -> &[(BeamState, f64)] {
        &self.slots
    }

    pub fn mapping(&self) -> &PortMapping {
        &self.mapping
    }

    pub fn period_ms(&self) -> f64 {
        *self.ends.last().expect("schedule is never empty")
    }

    /// Index of the slot active at `t_ms`.
    pub fn slot_index(&self, t_ms: f64) -> Result<usize> {
        if !(t_ms >= 0.0) || !t_ms.is_finite() {
            return domain(format!("time must be finite and >= 0, got {t_ms}"));
        }
        let period = self.period_ms();
        let cycles = t_ms / period;
        let mut frac = cycles - cycles.floor();
        let near = frac.round();
        if (frac - near).abs() < BOUNDARY_TOL {
            frac = 0.0;
        }
        let local = frac * period;
        for (i, &end) in self.ends.iter().enumerate() {
            if (local - end).abs() <= BOUNDARY_TOL * period {
                return Ok((i + 1) % self.slots.len());
            }
            if local < end {
                return Ok(i);
            }
        }
        Ok(0)
    }

    pub fn state_at(&self, t_ms: f64) -> Result<BeamState> {
        Ok(self.slots[self.slot_index(t_ms)?].0)
    }

    /// Port weights (ports ascending) of the beamstate active at `t_ms`.
    pub fn excitation_at(&self, t_ms: f64) -> Result<Vec<Complex64>> {
        port_vector(&ExcitationMatrix::beamstate(self.state_at(t_ms)?), &self.mapping)
    }
}

/// On-disk schedule description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleFile {
    pub slot_ms: f64,
    pub states: Vec<BeamState>,
    #[serde(default)]
    pub mapping: MappingKind,
}

impl ScheduleFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn build(&self) -> Result<SlotSchedule> {
        SlotSchedule::new(&self.states, self.slot_ms, self.mapping.mapping()?)
    }
}
