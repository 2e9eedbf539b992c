// Expansivity, sensitivity and mixing witnesses for G_f0.
//
// `cargo run --release --example topology`

use cihide::ci::{PhasePoint, Strategy};
use cihide::dynamics::{construct_mixing_witness, probe_expansivity, probe_sensitivity, run_mixing_trials};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = probe_expansivity(4, 2_000, 15, 15, 0)?;
    println!(
        "expansivity: {}/{} pairs reached distance {}; {} equal-state pairs, all jumping to 2: {}",
        r.pairs_separated,
        r.pairs_tested,
        r.epsilon,
        r.equal_state_pairs,
        r.equal_state_separated_by_two == r.equal_state_pairs
    );

    let s = probe_sensitivity(4, 500, 10, 0)?;
    println!("sensitivity: ratio {} above delta = {}", s.success_ratio, s.delta);

    let source = PhasePoint::new("000".parse()?, Strategy::new(vec![1], 3)?)?;
    let target = PhasePoint::new("011".parse()?, Strategy::new(vec![3, 2], 3)?)?;
    let w = construct_mixing_witness(&source, 1, &target)?;
    println!(
        "mixing witness: strategy {:?}, flips {:?}, {} steps, verified {}",
        w.constructed.strategy.terms(),
        w.flips,
        w.steps,
        w.verified
    );
    let m = run_mixing_trials(16, 500, 15, 0)?;
    println!("mixing trials: {}/{} verified", m.verified, m.trials);
    Ok(())
}
