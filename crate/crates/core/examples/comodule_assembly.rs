//! Assembles a composite comodule from compatible pieces and splits it again.

use chromalg::comod::{assemble, compatibility_check, nine_diagram_check, split};
use chromalg::coeffring::Fq;
use chromalg::hopfalg::CompositeHopf;
use chromalg::spaces::{Flavor, LensModel};

fn main() -> chromalg::Result<()> {
    let fq = Fq::new(3, 2)?;
    let h = CompositeHopf::with_default_bound(fq.clone(), 3, 2)?;
    let lens = LensModel::new(fq, 3, 2, Flavor::K, vec![]);
    let pieces = lens.clambda(&h)?;
    println!("compatible: {}", compatibility_check(&h, &pieces).ok);
    let assembled = assemble(&h, &pieces)?;
    println!("matches the direct coaction: {}", assembled.coaction == lens.composite_comodule(&h)?.coaction);
    println!("split recovers the pieces: {}", split(&h, &assembled) == pieces);
    for c in nine_diagram_check(&h, &pieces) {
        println!("  {} {}", if c.ok { "ok  " } else { "FAIL" }, c.name);
    }
    Ok(())
}
