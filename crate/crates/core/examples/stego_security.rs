// Output distributions of CIIS and CIDS for uniform hosts.
//
// `cargo run --release --example stego_security`

use cihide::security::{exhaustive_pushforward, run_uniformity, KeyPolicy, UniformityExperiment};
use cihide::stego::{EmbedKey, Message, Mode};
use cihide::strategies::{Fraction64, PlcmParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let key = EmbedKey::new(Fraction64(0x0123_4567_89ab_cdef), 8, PlcmParams::default(), 4)?;
    let msg = Message(Fraction64(0x5555_aaaa_5555_aaaa));
    for mode in [Mode::Ciis, Mode::Cids] {
        let pf = exhaustive_pushforward(4, &key, msg, mode)?;
        println!(
            "{mode}: exhaustive image of B^4 has {} states, bijective = {}",
            pf.support_size(),
            pf.is_bijection()
        );
    }

    for mode in [Mode::Ciis, Mode::Cids] {
        let exp = UniformityExperiment {
            n_cells: 8,
            samples: 50_000,
            mode,
            key_policy: KeyPolicy::RandomPerSample,
            iterations: 16,
            plcm: PlcmParams::default(),
            seed: 0,
        };
        let r = run_uniformity(&exp)?;
        println!("{mode}: chi2 = {:.1} on {} df, p = {:.3e}, verdict {:?}", r.chi_square, r.degrees, r.p_value, r.verdict);
    }
    Ok(())
}
