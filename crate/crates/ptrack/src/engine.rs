//! Event-driven simulation of piecewise-constant front fields.
//!
//! Fronts move at fixed assigned speeds between events; collisions are
//! resolved with exact outgoing strengths through the Riemann solver, so the
//! only approximation in a run is in the speeds themselves.

use std::io::Write as _;

use serde::Serialize;

use crate::curves::{curve_u, WaveFamily, WaveKind};
use crate::error::{PtrackError, Result};
use crate::pressure::PressureLaw;
use crate::riemann::{self, FrontJump, RWave, WaveSpeed};
use crate::state::State;

/// Tolerance for "on the named curve" checks when fronts are constructed.
pub const CURVE_TOL: f64 = 1e-9;
/// Collision times closer than this are one multi-front event.
pub const SIMULTANEITY_TOL: f64 = 1e-12;

/// How fronts are assigned speeds.  Shocks always take the exact
/// jump-condition speed; simple-wave fronts take a point inside their
/// characteristic fan selected by the weight (0 = slow edge, 1 = fast edge).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedPolicy {
    pub fan_weight: f64,
}

impl SpeedPolicy {
    /// Arithmetic mean of the side characteristic speeds.
    pub fn mean() -> Self {
        SpeedPolicy { fan_weight: 0.5 }
    }

    pub fn weighted(w: f64) -> Self {
        assert!((0.0..=1.0).contains(&w));
        SpeedPolicy { fan_weight: w }
    }
}

impl Default for SpeedPolicy {
    fn default() -> Self {
        SpeedPolicy::mean()
    }
}

/// A moving discontinuity.
#[derive(Debug, Clone, Copy)]
pub struct WaveFront {
    pub id: u64,
    pub family: WaveFamily,
    pub kind: WaveKind,
    pub x: f64,
    pub speed: f64,
    pub left: State,
    pub right: State,
}

impl WaveFront {
    pub fn strength(&self) -> f64 {
        (self.left.h - self.right.h).abs()
    }

    pub fn signed_strength(&self) -> f64 {
        self.left.h - self.right.h
    }

    pub fn as_jump(&self) -> FrontJump {
        FrontJump {
            family: self.family,
            kind: self.kind,
            left: self.left,
            right: self.right,
        }
    }
}

/// Compact front description stored in event logs and CSV rows.
#[derive(Debug, Clone, Serialize)]
pub struct FrontInfo {
    pub id: u64,
    pub family: WaveFamily,
    pub kind: WaveKind,
    pub strength: f64,
    pub speed: f64,
    pub left_u: f64,
    pub left_v: f64,
    pub right_u: f64,
    pub right_v: f64,
}

impl FrontInfo {
    fn of(f: &WaveFront) -> Self {
        FrontInfo {
            id: f.id,
            family: f.family,
            kind: f.kind,
            strength: f.strength(),
            speed: f.speed,
            left_u: f.left.u,
            left_v: f.left.v,
            right_u: f.right.u,
            right_v: f.right.v,
        }
    }
}

/// An upcoming collision between adjacent fronts.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionEvent {
    pub time: f64,
    pub x: f64,
    /// Contiguous run of participating fronts, by index into the field.
    pub first: usize,
    pub last: usize,
}

/// One resolved interaction.
#[derive(Debug, Clone, Serialize)]
pub struct EventRecord {
    pub index: usize,
    pub t: f64,
    pub x: f64,
    pub consumed: Vec<FrontInfo>,
    pub produced: Vec<FrontInfo>,
}

/// Straight-line trajectory of one front in the x-t plane.
#[derive(Debug, Clone, Serialize)]
pub struct FrontPath {
    pub id: u64,
    pub family: WaveFamily,
    pub kind: WaveKind,
    pub t0: f64,
    pub x0: f64,
    pub t1: f64,
    pub x1: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesPoint {
    pub t: f64,
    pub total_strength: f64,
    pub min_v: f64,
    pub front_count: usize,
}

/// Snapshot row: the full front table at one instant.
#[derive(Debug, Clone, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub event_index: usize,
    pub fronts: Vec<(f64, FrontInfo)>, // (x, info)
}

/// Recorded history of a run.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SimulationTrace {
    pub series: Vec<SeriesPoint>,
    pub events: Vec<EventRecord>,
    pub snapshots: Vec<Snapshot>,
    pub paths: Vec<FrontPath>,
    pub truncated: bool,
}

impl SimulationTrace {
    /// CSV with one row per front per snapshot.
    pub fn snapshots_csv(&self) -> String {
        let mut out = String::from(
            "t,event_index,x,family,kind,strength,left_u,left_v,right_u,right_v\n",
        );
        for snap in &self.snapshots {
            for (x, f) in &snap.fronts {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    snap.t,
                    snap.event_index,
                    x,
                    f.family,
                    f.kind,
                    f.strength,
                    f.left_u,
                    f.left_v,
                    f.right_u,
                    f.right_v
                ));
            }
        }
        out
    }

    /// Time series of (t, total strength, min v, front count) as CSV.
    pub fn series_csv(&self) -> String {
        let mut out = String::from("t,total_strength,min_v,front_count\n");
        for p in &self.series {
            out.push_str(&format!(
                "{},{},{},{}\n",
                p.t, p.total_strength, p.min_v, p.front_count
            ));
        }
        out
    }

    pub fn events_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.events)?)
    }

    pub fn write_file(path: &std::path::Path, contents: &str) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(contents.as_bytes())?;
        Ok(())
    }
}

/// Ordered list of fronts with the constant state left of everything.
#[derive(Debug, Clone)]
pub struct FrontField {
    pub law: PressureLaw,
    pub leftmost: State,
    pub fronts: Vec<WaveFront>,
    pub t: f64,
    pub policy: SpeedPolicy,
    next_id: u64,
}

impl FrontField {
    pub fn new(law: PressureLaw, leftmost: State, policy: SpeedPolicy) -> Self {
        FrontField {
            law,
            leftmost,
            fronts: Vec::new(),
            t: 0.0,
            policy,
            next_id: 0,
        }
    }

    fn fresh_id(&mut self) -> u64 {
        self.next_id += 1;
        self.next_id
    }

    /// Speed for a wave under this field's policy.
    pub fn speed_for(&self, w: &RWave) -> f64 {
        match w.speed {
            WaveSpeed::Shock(s) => s,
            WaveSpeed::Fan { .. } => w.speed.pick(self.policy.fan_weight),
        }
    }

    /// Appends a front at position `x`; fronts must be pushed left to right
    /// and chain onto the previous right state.
    pub fn push_front(
        &mut self,
        family: WaveFamily,
        kind: WaveKind,
        x: f64,
        left: State,
        right: State,
    ) -> Result<u64> {
        let expect_left = self
            .fronts
            .last()
            .map(|f| f.right)
            .unwrap_or(self.leftmost);
        let scale = 1.0_f64.max(expect_left.u.abs());
        if (left.u - expect_left.u).abs() > CURVE_TOL * scale
            || (left.v - expect_left.v).abs() > CURVE_TOL * scale
        {
            return Err(PtrackError::Topology(format!(
                "pushed front does not chain: left=({}, {}), expected ({}, {})",
                left.u, left.v, expect_left.u, expect_left.v
            )));
        }
        if let Some(prev) = self.fronts.last() {
            if x < prev.x {
                return Err(PtrackError::Topology(format!(
                    "pushed front at x={x} left of previous front at {}",
                    prev.x
                )));
            }
        }
        let u_expected = curve_u(&self.law, kind, family, &left, right.v)?;
        let scale = 1.0_f64.max(left.u.abs()).max(right.u.abs());
        if (u_expected - right.u).abs() > CURVE_TOL * scale {
            return Err(PtrackError::OffCurve(format!(
                "front states not on the {kind}{family} branch: u={}, expected {}",
                right.u, u_expected
            )));
        }
        let speed = self.compute_speed(family, kind, &left, &right)?;
        let id = self.fresh_id();
        self.fronts.push(WaveFront {
            id,
            family,
            kind,
            x,
            speed,
            left,
            right,
        });
        Ok(id)
    }

    fn compute_speed(
        &self,
        family: WaveFamily,
        kind: WaveKind,
        left: &State,
        right: &State,
    ) -> Result<f64> {
        Ok(match kind {
            WaveKind::Shock => {
                let dv = right.v - left.v;
                let dp = self.law.p(right.v)? - self.law.p(left.v)?;
                let s = (-dp / dv).sqrt();
                match family {
                    WaveFamily::First => -s,
                    WaveFamily::Second => s,
                }
            }
            WaveKind::Rarefaction | WaveKind::Compression => {
                let c_l = self.law.wave_speed(left.v)?;
                let c_r = self.law.wave_speed(right.v)?;
                let (a, b) = match family {
                    WaveFamily::First => (-c_l, -c_r),
                    WaveFamily::Second => (c_l, c_r),
                };
                let (slow, fast) = (a.min(b), a.max(b));
                slow + self.policy.fan_weight * (fast - slow)
            }
        })
    }

    /// Splits a simple-wave front in two at the intermediate level `h_mid`,
    /// both pieces keeping the kind and lying on the same invariant line.
    pub fn split_front(&mut self, index: usize, h_mid: f64) -> Result<()> {
        let f = self.fronts[index];
        if f.kind == WaveKind::Shock {
            return Err(PtrackError::Topology("cannot split a shock front".into()));
        }
        let (h_lo, h_hi) = (f.left.h.min(f.right.h), f.left.h.max(f.right.h));
        if h_mid <= h_lo || h_mid >= h_hi {
            return Err(PtrackError::Range {
                quantity: "split level h".into(),
                value: h_mid,
                lo: h_lo,
                hi: h_hi,
            });
        }
        let u_mid = match f.family {
            WaveFamily::First => f.left.u + f.left.h - h_mid,
            WaveFamily::Second => f.left.u + h_mid - f.left.h,
        };
        let mid = State::from_uh(&self.law, u_mid, h_mid)?;
        let s_a = self.compute_speed(f.family, f.kind, &f.left, &mid)?;
        let s_b = self.compute_speed(f.family, f.kind, &mid, &f.right)?;
        let id_b = self.fresh_id();
        self.fronts[index] = WaveFront {
            speed: s_a,
            right: mid,
            ..f
        };
        self.fronts.insert(
            index + 1,
            WaveFront {
                id: id_b,
                family: f.family,
                kind: f.kind,
                x: f.x,
                speed: s_b,
                left: mid,
                right: f.right,
            },
        );
        Ok(())
    }

    /// Sum of front strengths.
    pub fn total_strength(&self) -> f64 {
        self.fronts.iter().map(|f| f.strength()).sum()
    }

    /// Smallest specific volume over all states of the field.
    pub fn min_specific_volume(&self) -> f64 {
        self.fronts
            .iter()
            .map(|f| f.right.v)
            .fold(self.leftmost.v, f64::min)
    }

    /// Checks positions ordered and states chained; used by tests and debug
    /// assertions after resolutions.
    pub fn validate_chain(&self) -> Result<()> {
        let mut prev_state = self.leftmost;
        let mut prev_x = f64::NEG_INFINITY;
        for f in &self.fronts {
            if f.x < prev_x - 1e-12 {
                return Err(PtrackError::Topology(format!(
                    "positions out of order at id {}",
                    f.id
                )));
            }
            let scale = 1.0_f64.max(prev_state.u.abs());
            if (f.left.u - prev_state.u).abs() > 1e-9 * scale
                || (f.left.v - prev_state.v).abs() > 1e-9 * scale
            {
                return Err(PtrackError::Topology(format!(
                    "chain broken before id {}",
                    f.id
                )));
            }
            prev_state = f.right;
            prev_x = f.x;
        }
        Ok(())
    }

    /// Earliest collision among adjacent converging fronts, with
    /// simultaneous hits merged into one multi-front event.
    pub fn next_collision(&self) -> Option<CollisionEvent> {
        let n = self.fronts.len();
        if n < 2 {
            return None;
        }
        let mut best: Option<(f64, usize)> = None;
        for i in 0..n - 1 {
            let a = &self.fronts[i];
            let b = &self.fronts[i + 1];
            if a.speed > b.speed {
                let dt = (b.x - a.x).max(0.0) / (a.speed - b.speed);
                let t_hit = self.t + dt;
                if best.map_or(true, |(tb, _)| t_hit < tb) {
                    best = Some((t_hit, i));
                }
            }
        }
        let (t_min, i_min) = best?;
        // absorb neighbours arriving at the same point and time
        let x_min = self.fronts[i_min].x + self.fronts[i_min].speed * (t_min - self.t);
        let close = |j: usize| -> bool {
            let f = &self.fronts[j];
            let xj = f.x + f.speed * (t_min - self.t);
            (xj - x_min).abs() <= SIMULTANEITY_TOL * (1.0 + x_min.abs())
        };
        let mut first = i_min;
        while first > 0 && close(first - 1) {
            first -= 1;
        }
        let mut last = i_min + 1;
        while last + 1 < n && close(last + 1) {
            last += 1;
        }
        Some(CollisionEvent {
            time: t_min,
            x: x_min,
            first,
            last,
        })
    }

    /// Advances every front to time `t`.
    pub fn advance_to(&mut self, t: f64) {
        let dt = t - self.t;
        for f in &mut self.fronts {
            f.x += f.speed * dt;
        }
        self.t = t;
    }

    /// Resolves one collision event: the participating run is replaced by
    /// the exact Riemann solution of its outermost states.
    pub fn resolve_event(
        &mut self,
        event: &CollisionEvent,
        trace: &mut SimulationTrace,
    ) -> Result<()> {
        self.advance_to(event.time);
        let run = &self.fronts[event.first..=event.last];
        let jumps: Vec<FrontJump> = run.iter().map(|f| f.as_jump()).collect();
        let consumed: Vec<FrontInfo> = run.iter().map(FrontInfo::of).collect();
        for f in run {
            trace.close_path(f, event.time);
        }
        let sol = riemann::resolve_interaction(&self.law, &jumps).map_err(|e| {
            PtrackError::Topology(format!(
                "event at t={}, x={}: {e}",
                event.time, event.x
            ))
        })?;
        let mut produced_fronts = Vec::new();
        for w in sol.surviving_waves() {
            let id = self.fresh_id();
            let front = WaveFront {
                id,
                family: w.family,
                kind: w.kind,
                x: event.x,
                speed: self.speed_for(&w),
                left: w.left,
                right: w.right,
            };
            trace.open_path(&front, event.time);
            produced_fronts.push(front);
        }
        let produced: Vec<FrontInfo> = produced_fronts.iter().map(FrontInfo::of).collect();
        self.fronts
            .splice(event.first..=event.last, produced_fronts);
        // patch chaining across dropped hairline waves
        if event.first < self.fronts.len() {
            let expect = if event.first == 0 {
                self.leftmost
            } else {
                self.fronts[event.first - 1].right
            };
            // only the middle state may have been perturbed by a dropped wave
            let f = &mut self.fronts[event.first];
            if (f.left.u - expect.u).abs() < 1e-8 * (1.0 + expect.u.abs()) {
                f.left = expect;
            }
        }
        let idx = trace.events.len();
        trace.events.push(EventRecord {
            index: idx,
            t: event.time,
            x: event.x,
            consumed,
            produced,
        });
        trace.series.push(SeriesPoint {
            t: event.time,
            total_strength: self.total_strength(),
            min_v: self.min_specific_volume(),
            front_count: self.fronts.len(),
        });
        Ok(())
    }

    /// Full front table as a snapshot.
    pub fn snapshot(&self, event_index: usize) -> Snapshot {
        Snapshot {
            t: self.t,
            event_index,
            fronts: self
                .fronts
                .iter()
                .map(|f| (f.x, FrontInfo::of(f)))
                .collect(),
        }
    }

    /// Runs until no more collisions, `t_end`, or `max_events`.
    pub fn run(&mut self, t_end: f64, max_events: usize) -> Result<SimulationTrace> {
        let mut trace = SimulationTrace::default();
        self.begin_trace(&mut trace);
        trace.series.push(SeriesPoint {
            t: self.t,
            total_strength: self.total_strength(),
            min_v: self.min_specific_volume(),
            front_count: self.fronts.len(),
        });
        trace.snapshots.push(self.snapshot(0));
        while let Some(ev) = self.next_collision() {
            if ev.time > t_end {
                break;
            }
            if trace.events.len() >= max_events {
                trace.truncated = true;
                break;
            }
            self.resolve_event(&ev, &mut trace)?;
        }
        if self.t < t_end && !trace.truncated {
            self.advance_to(t_end);
        }
        self.finish_trace(&mut trace);
        trace.snapshots.push(self.snapshot(trace.events.len()));
        Ok(trace)
    }

    /// Registers every live front with the trace path table.
    pub fn begin_trace(&self, trace: &mut SimulationTrace) {
        for f in &self.fronts {
            trace.open_path(f, self.t);
        }
    }

    /// Closes the paths of fronts still alive.
    pub fn finish_trace(&self, trace: &mut SimulationTrace) {
        for f in &self.fronts {
            trace.close_path(f, self.t);
        }
    }
}

impl SimulationTrace {
    fn open_path(&mut self, f: &WaveFront, t: f64) {
        self.paths.push(FrontPath {
            id: f.id,
            family: f.family,
            kind: f.kind,
            t0: t,
            x0: f.x,
            t1: t,
            x1: f.x,
        });
    }

    fn close_path(&mut self, f: &WaveFront, t: f64) {
        if let Some(p) = self.paths.iter_mut().rev().find(|p| p.id == f.id) {
            p.t1 = t;
            p.x1 = f.x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pressure::gamma_law;
    use approx::assert_relative_eq;

    /// Two counter-moving shocks built on exact curves.
    fn two_shock_field(law: &PressureLaw) -> FrontField {
        let ul = State::new(law, 0.0, 1.0).unwrap();
        let mut field = FrontField::new(law.clone(), ul, SpeedPolicy::mean());
        // forward shock down from ul at x=0... build left-to-right:
        // leftmost | 2-shock | mid | 1-shock | right
        let v_mid = 1.1;
        let u_mid = curve_u(law, WaveKind::Shock, WaveFamily::Second, &ul, v_mid).unwrap();
        let mid = State::new(law, u_mid, v_mid).unwrap();
        field
            .push_front(WaveFamily::Second, WaveKind::Shock, 0.0, ul, mid)
            .unwrap();
        let v_r = 1.0;
        let u_r = curve_u(law, WaveKind::Shock, WaveFamily::First, &mid, v_r).unwrap();
        let right = State::new(law, u_r, v_r).unwrap();
        field
            .push_front(WaveFamily::First, WaveKind::Shock, 1.0, mid, right)
            .unwrap();
        field
    }

    #[test]
    fn kinematics_of_two_fronts() {
        let law = gamma_law(2.0).unwrap();
        let ul = State::new(&law, 0.0, 1.0).unwrap();
        let mut field = FrontField::new(law.clone(), ul, SpeedPolicy::mean());
        // hand-made fronts with synthetic speeds via direct construction
        let v_mid = 1.2;
        let u_mid = curve_u(&law, WaveKind::Shock, WaveFamily::Second, &ul, v_mid).unwrap();
        let mid = State::new(&law, u_mid, v_mid).unwrap();
        field
            .push_front(WaveFamily::Second, WaveKind::Shock, 0.0, ul, mid)
            .unwrap();
        let u_r = curve_u(&law, WaveKind::Shock, WaveFamily::First, &mid, 1.0).unwrap();
        let right = State::new(&law, u_r, 1.0).unwrap();
        field
            .push_front(WaveFamily::First, WaveKind::Shock, 1.0, mid, right)
            .unwrap();
        let s0 = field.fronts[0].speed;
        let s1 = field.fronts[1].speed;
        assert!(s0 > 0.0 && s1 < 0.0);
        let ev = field.next_collision().unwrap();
        assert_relative_eq!(ev.time, 1.0 / (s0 - s1), epsilon = 1e-12);
    }

    #[test]
    fn no_event_when_diverging() {
        let law = gamma_law(2.0).unwrap();
        let ul = State::new(&law, 0.0, 1.2).unwrap();
        let mut field = FrontField::new(law.clone(), ul, SpeedPolicy::mean());
        // 1-front then 2-front: they separate
        let v_mid = 1.3;
        let u_mid = curve_u(&law, WaveKind::Rarefaction, WaveFamily::First, &ul, v_mid).unwrap();
        let mid = State::new(&law, u_mid, v_mid).unwrap();
        field
            .push_front(WaveFamily::First, WaveKind::Rarefaction, 0.0, ul, mid)
            .unwrap();
        let u_r = curve_u(&law, WaveKind::Rarefaction, WaveFamily::Second, &mid, 1.2).unwrap();
        let right = State::new(&law, u_r, 1.2).unwrap();
        field
            .push_front(WaveFamily::Second, WaveKind::Rarefaction, 0.5, mid, right)
            .unwrap();
        assert!(field.next_collision().is_none());
    }

    #[test]
    fn brute_force_confirms_earliest_event() {
        let law = gamma_law(3.0).unwrap();
        let field = two_shock_field(&law);
        let ev = field.next_collision().unwrap();
        // all-pairs check: no adjacent pair intersects earlier
        for i in 0..field.fronts.len() - 1 {
            let a = &field.fronts[i];
            let b = &field.fronts[i + 1];
            if a.speed > b.speed {
                let t = field.t + (b.x - a.x) / (a.speed - b.speed);
                assert!(ev.time <= t + 1e-15);
            }
        }
    }

    #[test]
    fn crossing_shocks_resolve_to_two_shocks() {
        let law = gamma_law(3.0).unwrap();
        let mut field = two_shock_field(&law);
        let before = field.fronts.len();
        let ev = field.next_collision().unwrap();
        let mut trace = SimulationTrace::default();
        field.begin_trace(&mut trace);
        field.resolve_event(&ev, &mut trace).unwrap();
        assert_eq!(field.fronts.len(), before);
        assert_eq!(field.fronts[0].kind, WaveKind::Shock);
        assert_eq!(field.fronts[0].family, WaveFamily::First);
        assert_eq!(field.fronts[1].kind, WaveKind::Shock);
        assert_eq!(field.fronts[1].family, WaveFamily::Second);
        field.validate_chain().unwrap();
        // outgoing strengths equal those of the Riemann solution of the
        // outermost states, by construction of the resolution
        let sol = riemann::solve(&law, &field.leftmost, &field.fronts[1].right).unwrap();
        assert_relative_eq!(
            field.fronts[0].strength(),
            sol.wave1.strength(),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            field.fronts[1].strength(),
            sol.wave2.strength(),
            epsilon = 1e-12
        );
        assert_eq!(trace.events.len(), 1);
        assert_eq!(trace.events[0].consumed.len(), 2);
        assert_eq!(trace.events[0].produced.len(), 2);
    }

    #[test]
    fn run_is_deterministic() {
        let law = gamma_law(3.0).unwrap();
        let mut f1 = two_shock_field(&law);
        let mut f2 = two_shock_field(&law);
        let t1 = f1.run(5.0, 100).unwrap();
        let t2 = f2.run(5.0, 100).unwrap();
        assert_eq!(t1.snapshots_csv(), t2.snapshots_csv());
        assert_eq!(t1.series_csv(), t2.series_csv());
    }

    #[test]
    fn single_front_run_has_no_events() {
        let law = gamma_law(2.0).unwrap();
        let ul = State::new(&law, 0.0, 1.0).unwrap();
        let mut field = FrontField::new(law.clone(), ul, SpeedPolicy::mean());
        let v_r = 1.4;
        let u_r = curve_u(&law, WaveKind::Shock, WaveFamily::Second, &ul, v_r).unwrap();
        let right = State::new(&law, u_r, v_r).unwrap();
        field
            .push_front(WaveFamily::Second, WaveKind::Shock, 0.0, ul, right)
            .unwrap();
        let total0 = field.total_strength();
        let trace = field.run(3.0, 10).unwrap();
        assert!(trace.events.is_empty());
        assert_relative_eq!(field.total_strength(), total0);
    }

    #[test]
    fn split_front_preserves_states_and_total() {
        let law = gamma_law(3.0).unwrap();
        let ul = State::new(&law, 0.0, 1.0).unwrap();
        let mut field = FrontField::new(law.clone(), ul, SpeedPolicy::mean());
        let v_r = 1.15;
        let u_r = curve_u(&law, WaveKind::Rarefaction, WaveFamily::First, &ul, v_r).unwrap();
        let right = State::new(&law, u_r, v_r).unwrap();
        field
            .push_front(WaveFamily::First, WaveKind::Rarefaction, 0.0, ul, right)
            .unwrap();
        let total = field.total_strength();
        let h_mid = 0.5 * (ul.h + right.h);
        field.split_front(0, h_mid).unwrap();
        assert_eq!(field.fronts.len(), 2);
        field.validate_chain().unwrap();
        assert_relative_eq!(field.total_strength(), total, epsilon = 1e-12);
        assert_eq!(field.fronts[0].kind, WaveKind::Rarefaction);
        assert_eq!(field.fronts[1].kind, WaveKind::Rarefaction);
    }

    #[test]
    fn three_fronts_meeting_at_one_point_resolve_as_one_event() {
        // 2-shock, 1-rarefaction, 1-shock arranged so all pairwise
        // collisions coincide: the run is resolved as a single Riemann
        // problem of the outermost states
        let law = gamma_law(3.0).unwrap();
        let ul = State::new(&law, 0.0, 1.0).unwrap();
        let mut field = FrontField::new(law.clone(), ul, SpeedPolicy::mean());
        let v_m = 1.15;
        let u_m = curve_u(&law, WaveKind::Shock, WaveFamily::Second, &ul, v_m).unwrap();
        let m0 = State::new(&law, u_m, v_m).unwrap();
        field
            .push_front(WaveFamily::Second, WaveKind::Shock, 0.0, ul, m0)
            .unwrap();
        let v_r1 = 1.22;
        let u_r1 = curve_u(&law, WaveKind::Rarefaction, WaveFamily::First, &m0, v_r1).unwrap();
        let m1 = State::new(&law, u_r1, v_r1).unwrap();
        field
            .push_front(WaveFamily::First, WaveKind::Rarefaction, 1.0, m0, m1)
            .unwrap();
        let v_r2 = 1.05;
        let u_r2 = curve_u(&law, WaveKind::Shock, WaveFamily::First, &m1, v_r2).unwrap();
        let right = State::new(&law, u_r2, v_r2).unwrap();
        field
            .push_front(WaveFamily::First, WaveKind::Shock, 2.0, m1, right)
            .unwrap();
        // reposition so every pair meets at time T at the same point
        let (s1, s2, s3) = (
            field.fronts[0].speed,
            field.fronts[1].speed,
            field.fronts[2].speed,
        );
        assert!(s1 > s2 && s2 > s3);
        let t_star = 1.0;
        field.fronts[0].x = 0.0;
        field.fronts[1].x = (s1 - s2) * t_star;
        field.fronts[2].x = field.fronts[1].x + (s2 - s3) * t_star;
        let ev = field.next_collision().unwrap();
        assert_eq!((ev.first, ev.last), (0, 2));
        assert_relative_eq!(ev.time, t_star, epsilon = 1e-12);
        let expected = riemann::solve(&law, &ul, &right).unwrap();
        let mut trace = SimulationTrace::default();
        field.begin_trace(&mut trace);
        field.resolve_event(&ev, &mut trace).unwrap();
        field.validate_chain().unwrap();
        assert_eq!(field.fronts.len(), expected.surviving_waves().len());
        assert_relative_eq!(
            field.fronts[0].strength(),
            expected.wave1.strength(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn event_budget_truncates_with_flag() {
        let law = gamma_law(3.0).unwrap();
        let mut field = two_shock_field(&law);
        let trace = field.run(1e9, 0).unwrap();
        assert!(trace.truncated);
        assert!(trace.events.is_empty());
    }

    #[test]
    fn min_volume_tracks_compression() {
        let law = gamma_law(3.0).unwrap();
        let field = two_shock_field(&law);
        assert!(field.min_specific_volume() <= 1.0);
    }
}
