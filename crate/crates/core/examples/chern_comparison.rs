//! Compares Chern classes along a solved isomorphism and prints the
//! change-of-basis matrix for the exterior generators.

use chromalg::coeffring::{Fq, Ring};
use chromalg::fgl::{honda_fgl, specialize_hazewinkel, Specialization};
use chromalg::isofind::solve_phi;
use chromalg::spaces::ChernData;

fn main() -> chromalg::Result<()> {
    let fq = Fq::for_heights(3, 2)?;
    let law = specialize_hazewinkel(&Specialization::e_law(3, 2), &fq, 28)?;
    let honda = honda_fgl(2, &fq, 28)?;
    let iso = solve_phi(&law, &honda, 9, 4)?;
    let data = ChernData::new(iso, &law)?;
    let t = &data.iso().tower;
    println!("image of x: {}", data.l_lens().ring().render(&data.theta_x()));
    for row in data.bhat_matrix()? {
        let cells: Vec<String> = row.iter().map(|c| t.render(c)).collect();
        println!("[{}]", cells.join(", "));
    }
    for c in data.checks()? {
        println!("{} {}", if c.ok { "ok  " } else { "FAIL" }, c.name);
    }
    Ok(())
}
