//! Reads Milnor operations off the lens comodule and recognizes a planted
//! combination of them.

use chromalg::coeffring::{Fq, Ring};
use chromalg::comod::{exterior_regular, extract_milnor, recognize_milnor};
use chromalg::hopfalg::CompositeHopf;
use chromalg::spaces::{Flavor, LensModel};

fn main() -> chromalg::Result<()> {
    let (p, n) = (3, 2);
    let fq = Fq::new(p, n)?;
    let h = CompositeHopf::with_default_bound(fq.clone(), p, n)?;
    let lens = LensModel::new(fq.clone(), p, n, Flavor::K, vec![]);
    let m = lens.lambda_comodule(&h)?;
    let q = extract_milnor(h.lambda(), &m);
    let names = lens.basis_names();
    for i in 0..n as usize {
        let y = lens.index(1, 0);
        let image: Vec<&str> = q.ops[i][y].iter().enumerate().filter(|(_, c)| !fq.is_zero(c)).map(|(k, _)| names[k].as_str()).collect();
        println!("(y)Q_{i} = {}", image.join(" + "));
    }
    println!("anticommute: {}", q.anticommutation_check(&fq).ok);

    let ext = exterior_regular(h.lambda());
    let qe = extract_milnor(h.lambda(), &ext);
    let planted = vec![fq.from_int(2), fq.one()];
    let op = qe.combination(&fq, &planted);
    let found = recognize_milnor(&qe, &fq, &op, ext.rank() - 1)?;
    let show = |v: &[u32]| v.iter().map(|c| fq.render(c)).collect::<Vec<_>>().join(", ");
    println!("recognized [{}], planted [{}]", show(&found), show(&planted));
    Ok(())
}
