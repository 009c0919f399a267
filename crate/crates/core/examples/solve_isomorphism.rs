//! Solves for an isomorphism from the deformation law to the Honda law over
//! a tower of extensions and verifies it.

use chromalg::coeffring::{Fq, Ring};
use chromalg::fgl::{honda_fgl, specialize_hazewinkel, Specialization};
use chromalg::isofind::{solve_phi, verify_iso};

fn main() -> chromalg::Result<()> {
    let fq = Fq::for_heights(3, 1)?;
    let law = specialize_hazewinkel(&Specialization::e_law(3, 1), &fq, 28)?;
    let honda = honda_fgl(1, &fq, 28)?;
    let iso = solve_phi(&law, &honda, 11, 6)?;
    println!("tower: {}", iso.tower.descriptor());
    for step in &iso.steps {
        println!("  {step:?}");
    }
    println!("phi(X) = {}", iso.ring1.render(&iso.phi));
    for c in verify_iso(&iso)? {
        println!("{} {}", if c.ok { "ok  " } else { "FAIL" }, c.name);
    }
    Ok(())
}
