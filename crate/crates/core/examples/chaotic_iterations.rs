// Iterating the vectorial negation along a strategy.
//
// `cargo run --example chaotic_iterations`

use cihide::ci::{g_step, iterate, orbit, BitState, Negation, PhasePoint, Strategy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x0: BitState = "0000".parse()?;
    let strategy = Strategy::new(vec![1, 2, 3, 4, 2], 4)?;

    for (n, state) in orbit(&x0, &strategy, &Negation, strategy.horizon())?.iter().enumerate() {
        println!("x^{n} = {state}");
    }
    println!("x^4 = {}", iterate(&x0, &strategy, &Negation, 4)?);

    // One step of G_f0 on a phase point consumes the strategy head.
    let p = PhasePoint::new("0101".parse()?, Strategy::new(vec![2, 1], 4)?)?;
    let q = g_step(&p, &Negation)?;
    println!("G({:?}, {}) = ({:?}, {})", p.strategy.terms(), p.state, q.strategy.terms(), q.state);

    // Any rule B^N -> B^N can drive the iterations; here a cyclic shift.
    let shift = |e: &BitState| {
        let mut bits = e.bits().to_vec();
        bits.rotate_right(1);
        BitState::from_bits(bits).expect("non-empty")
    };
    println!("shift rule: {}", iterate(&"1000".parse()?, &Strategy::new(vec![2, 3, 4], 4)?, &shift, 3)?);
    Ok(())
}
