//! Moves random twisted modules over a function algebroid to comodules and
//! back.

use chromalg::check::all_ok;
use chromalg::comod::{comod_to_twisted, twisted_to_comod, TwistedModule};
use chromalg::hopfalg::FunctionHopf;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> chromalg::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for h in FunctionHopf::standard_instances()? {
        let t = TwistedModule::random(&h, &mut rng);
        let c = twisted_to_comod(&h, &t);
        println!(
            "{} rank {}: twisted ok {}, comodule ok {}, round trip {}",
            h.group().name(),
            t.rank(),
            all_ok(&t.check(&h, &mut rng, 3)),
            all_ok(&c.check(&h)),
            comod_to_twisted(&h, &c) == t
        );
    }
    Ok(())
}
