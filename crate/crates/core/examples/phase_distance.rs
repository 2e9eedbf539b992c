// Certified distance brackets on the phase space.
//
// `cargo run --example phase_distance`

use cihide::ci::{PhasePoint, Strategy};
use cihide::metric::d_total;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = PhasePoint::new("0110".parse()?, Strategy::new(vec![1, 2, 3, 4, 1, 2, 3, 4], 4)?)?;
    let y = PhasePoint::new("0110".parse()?, Strategy::new(vec![1, 2, 4, 4, 1, 2, 3, 4], 4)?)?;
    for horizon in [1, 2, 4, 8] {
        let d = d_total(&x, &y, horizon)?;
        println!(
            "L = {horizon}: d_e = {}, d_s in [{:.10}, {:.10}] (width {:.1e})",
            d.state_part,
            d.strategy.lower(),
            d.strategy.upper(),
            d.strategy.width()
        );
    }
    Ok(())
}
