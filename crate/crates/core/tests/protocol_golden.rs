//! Golden-file checks for the protocol builder and the sequence DSL.

use qfb_core::feedback::{build_arbitrary_prep, FeedbackSpec};
use qfb_core::seqlang::{doc_from_schedule, lower, parse, serialize, StmtKind};
use qfb_core::{DeviceParams, EventKind, PulseSchedule};

use std::f64::consts::PI;

const PREP_GOLDEN: &str = include_str!("golden/arbitrary_prep.seq");
const DEMO_GOLDEN: &str = include_str!("golden/init_demo.seq");

fn assert_schedules_match(a: &PulseSchedule, b: &PulseSchedule) {
    assert_eq!(a.events.len(), b.events.len(), "\n{a:#?}\nvs\n{b:#?}");
    for (x, y) in a.events.iter().zip(&b.events) {
        match (x.kind, y.kind) {
            (EventKind::XRotation { angle: p }, EventKind::XRotation { angle: q }) => {
                assert!((p - q).abs() < 1e-12, "pulse angle {p} vs {q}")
            }
            (k, l) => assert_eq!(k, l),
        }
        assert!((x.start - y.start).abs() < 1e-21, "start {} vs {}", x.start, y.start);
        assert!((x.duration - y.duration).abs() < 1e-21);
    }
}

#[test]
fn arbitrary_prep_matches_hand_constructed_golden() {
    // θ1 = π/2, θ2 = π/3, φ = π/4 on the default device.
    let device = DeviceParams::default();
    let spec = FeedbackSpec::for_device(PI / 2.0, PI / 3.0, PI / 4.0, &device).unwrap();
    let schedule = build_arbitrary_prep(&spec, &device).unwrap();
    assert_eq!(serialize(&doc_from_schedule(&schedule)), PREP_GOLDEN);

    // The golden text lowers back to the same schedule.
    let lowered = lower(&parse(PREP_GOLDEN).unwrap(), &device).unwrap();
    assert_schedules_match(&schedule, &lowered);
}

#[test]
fn demo_sequence_parses_to_nine_statements() {
    let doc = parse(DEMO_GOLDEN).unwrap();
    assert_eq!(doc.statements.len(), 9);
    assert!(doc.settings.is_empty());
    let kinds: Vec<_> = doc.statements.iter().map(|s| s.kind).collect();
    assert!(matches!(kinds[0], StmtKind::PulseDuration { .. }));
    assert!(matches!(kinds[1], StmtKind::Readout { on: true }));
    assert!(matches!(kinds[2], StmtKind::PulseAngle { .. }));
    assert!(matches!(kinds[3], StmtKind::Wait { .. }));
    assert!(matches!(kinds[4], StmtKind::PulseAngle { .. }));
    assert!(matches!(kinds[5], StmtKind::Readout { on: false }));
    assert!(matches!(kinds[6], StmtKind::Readout { on: true }));
    assert!(matches!(kinds[7], StmtKind::Measure));
    assert!(matches!(kinds[8], StmtKind::Readout { on: false }));
}

#[test]
fn demo_sequence_round_trips_canonically() {
    let doc = parse(DEMO_GOLDEN).unwrap();
    let canonical = serialize(&doc);
    // Comments are dropped; everything else is already canonical.
    let expected: String = DEMO_GOLDEN
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(canonical, expected);
    assert_eq!(parse(&canonical).unwrap(), doc);
}

#[test]
fn settings_retime_the_protocol() {
    // δω = 2π·125 MHz makes the selective half-period wait exactly 2 ns; a
    // document carrying that override runs the echo correctly on a device
    // whose default shift is different.
    let src = "\
set delta_omega_mhz = 125
readout on
pulse x 90deg
wait 2ns
wait 2ns
pulse x 90deg
readout off
";
    let device = DeviceParams::default();
    let schedule = lower(&parse(src).unwrap(), &device).unwrap();
    let mut rng = qfb_core::RandomSource::new(91, 0);
    for initial in [qfb_core::PureState::ground(), qfb_core::PureState::excited()] {
        let (_, final_state) =
            qfb_core::simulate_schedule(&schedule, &initial, &mut rng).unwrap();
        assert!(
            qfb_core::fidelity(&final_state, &qfb_core::PureState::excited()) > 1.0 - 1e-9
        );
    }
}

#[test]
fn demo_sequence_lowers_with_latch_offsets() {
    let device = DeviceParams::default();
    let schedule = lower(&parse(DEMO_GOLDEN).unwrap(), &device).unwrap();
    schedule.validate().unwrap();
    assert_eq!(schedule.window_count(), 2);
    // The first conditional pulse starts one bifurcation time after its
    // window opens.
    let on = schedule.events.iter().position(|e| e.kind == EventKind::ReadoutOn).unwrap();
    let first_conditional = &schedule.events[on + 1];
    let latch = schedule.events[on].start + device.jba.tau_jba();
    assert!((first_conditional.start - latch).abs() < 1e-21);
}
