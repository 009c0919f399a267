//! Builds an automorphism of the Honda law with coefficients in F_9 and
//! recovers the coefficients from its series.

use chromalg::coeffring::{Fq, Ring};
use chromalg::fgl::honda_fgl;

fn main() -> chromalg::Result<()> {
    let (p, n) = (3, 2);
    let fq = Fq::for_heights(p, n)?;
    let honda = honda_fgl(n, &fq, 28)?;
    let g = fq.subfield_generator(n).expect("F_9 inside the field");
    let endo = honda.honda_endo(&[g, fq.pow(&g, 3)])?;
    println!("t(X) = {}", honda.ring1().render(&endo.series));
    println!("automorphism: {}", endo.is_automorphism());
    println!("endomorphism check: {}", honda.check_endomorphism(&endo.series)?.ok);
    println!("recovered coefficients: {:?}", honda.recognize_endo(&endo.series)?);
    Ok(())
}
