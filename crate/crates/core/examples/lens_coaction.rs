//! Prints the coaction on the lens model and the projective model's
//! coaction through the Honda law.

use chromalg::check::all_ok;
use chromalg::coeffring::{Fq, Ring};
use chromalg::fgl::honda_fgl;
use chromalg::hopfalg::CompositeHopf;
use chromalg::spaces::{Flavor, LensModel, ProjModel};

fn main() -> chromalg::Result<()> {
    let (p, n) = (3, 2);
    let fq = Fq::for_heights(p, n)?;
    let h = CompositeHopf::with_default_bound(fq.clone(), p, n)?;
    let lens = LensModel::new(fq.clone(), p, n, Flavor::K, vec![]);
    let m = lens.composite_comodule(&h)?;
    for j in [lens.index(0, 1), lens.index(1, 0)] {
        for (k, g) in m.coaction[j].iter().enumerate().filter(|(_, g)| !g.is_empty()) {
            println!("rho({}) has ({}) * {}", m.names[j], h.gamma().render(g), m.names[k]);
        }
    }
    println!("comodule axioms: {}", all_ok(&m.check(h.hopf())));
    let law = honda_fgl(n, &fq, 28)?;
    let proj = ProjModel::with_default_trunc(fq, p, n, Flavor::K, vec![]);
    let rx = proj.coaction_x(&h, &law)?;
    println!("projective rho(x) has {} terms", rx.len());
    println!("projective comodule axioms: {}", all_ok(&proj.c_comodule(&h, &law)?.check(h.c_part())));
    Ok(())
}
