// Strategy generation: PLCM orbits for CIIS, cover bits for CIDS.
//
// `cargo run --example strategies`

use cihide::strategies::{cids_strategy, ciis_strategy, key_mix, plcm, Fraction64, PlcmParams, UnitValue};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let msg: Fraction64 = "243f6a8885a308d3".parse()?;
    let key: Fraction64 = "13198a2e03707344".parse()?;
    let params = PlcmParams::new("4ccccccccccccccc".parse()?, 32)?;

    let mut x = UnitValue::from(key_mix(msg, key));
    print!("PLCM orbit:");
    for _ in 0..6 {
        print!(" {:.6}", x.to_f64());
        x = plcm(x, &params);
    }
    println!();

    let ciis = ciis_strategy(msg, key, &params, 8, 16)?;
    println!("CIIS (N = 8): {:?}", ciis.terms());

    let cover = "10110010".parse()?;
    println!("CIDS for cover 10110010: {:?}", cids_strategy(&cover, 12).terms());
    Ok(())
}
