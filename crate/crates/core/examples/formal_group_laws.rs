//! Builds the Honda law and the one-parameter deformation law, checks the
//! group law axioms and prints their p-series.

use chromalg::check::all_ok;
use chromalg::coeffring::{Fq, Ring};
use chromalg::fgl::{default_trunc, honda_fgl, specialize_hazewinkel, Specialization};

fn main() -> chromalg::Result<()> {
    let (p, n) = (3, 2);
    let fq = Fq::for_heights(p, n)?;
    let trunc = default_trunc(p, n);
    let honda = honda_fgl(n, &fq, trunc)?;
    let deformation = specialize_hazewinkel(&Specialization::e_law(p, n), &fq, trunc)?;
    for (name, law) in [("honda", &honda), ("deformation", &deformation)] {
        println!("{name} law over {} mod degree {trunc}", fq.descriptor());
        println!("  axioms hold: {}", all_ok(&law.check_axioms()?));
        println!("  additive below X^{}: {}", p.pow(n), law.check_strict_height(n).ok);
        println!("  [p](X) = {}", law.ring1().render(&law.p_series()?));
        println!("  height at u = 0: {:?}", law.height()?);
    }
    Ok(())
}
