//! Correlated Rayleigh fading for the two receivers: sample statistics,
//! region frequencies and the per-block rates of the three messages.
//!
//! ```text
//! cargo run --release --example fading_channel
//! ```

use secure_qos::channel::{
    classify_region, instantaneous_rates, sample_fading, FadingScenario, PowerSplit, Region,
};
use secure_qos::rng::substream;

fn main() -> secure_qos::Result<()> {
    let split = PowerSplit::uniform(0.5)?;
    let n = 200_000;
    println!("{:>5} {:>9} {:>9} {:>9} {:>8} {:>8} {:>8} {:>8}", "rho", "E z1", "E z2", "corr", "Pr G1", "E R0", "E R1", "E R2");
    for rho in [0.0, 0.3, 0.6, 0.9] {
        let scenario = FadingScenario::new(1.0, 2.0, rho)?;
        let mut rng = substream(42, 0);
        let (mut s1, mut s2, mut s11, mut s22, mut s12) = (0.0, 0.0, 0.0, 0.0, 0.0);
        let mut g1 = 0usize;
        let mut rates = [0.0; 3];
        for _ in 0..n {
            let z = sample_fading(&scenario, &mut rng);
            s1 += z.z1;
            s2 += z.z2;
            s11 += z.z1 * z.z1;
            s22 += z.z2 * z.z2;
            s12 += z.z1 * z.z2;
            if classify_region(z) == Region::Gamma1 {
                g1 += 1;
            }
            let r = instantaneous_rates(z, 1.0, split);
            rates[0] += r.r0;
            rates[1] += r.r1;
            rates[2] += r.r2;
        }
        let nf = n as f64;
        let (m1, m2) = (s1 / nf, s2 / nf);
        let corr = (s12 / nf - m1 * m2) / ((s11 / nf - m1 * m1) * (s22 / nf - m2 * m2)).sqrt();
        println!(
            "{rho:>5} {m1:>9.4} {m2:>9.4} {corr:>9.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            g1 as f64 / nf,
            rates[0] / nf,
            rates[1] / nf,
            rates[2] / nf
        );
    }
    Ok(())
}
