//! Checks the Hopf algebroid axioms for the exterior algebra, the
//! function algebroids of finite group actions and the composite algebroid.

use chromalg::check::all_ok;
use chromalg::coeffring::Fq;
use chromalg::hopfalg::{check_axioms_sampled, CompositeHopf, FunctionHopf, HopfAlgebroid, SeriesHopf};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> chromalg::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let lambda = SeriesHopf::exterior(Fq::new(3, 2)?, 2);
    println!("{}: {}", lambda.name(), all_ok(&check_axioms_sampled(&lambda, &mut rng, 4)));
    for h in FunctionHopf::standard_instances()? {
        let ok = all_ok(&check_axioms_sampled(&h, &mut rng, 4)) && all_ok(&h.check_m_iso(&mut rng, 4));
        println!("{}: {ok}", h.name());
    }
    let composite = CompositeHopf::with_default_bound(Fq::new(3, 2)?, 3, 2)?;
    println!(
        "{}: {} (extension {})",
        composite.hopf().name(),
        all_ok(&check_axioms_sampled(composite.hopf(), &mut rng, 3)),
        all_ok(&composite.check_extension())
    );
    Ok(())
}
