//! Fixture fans for the benchmarks.

use toric_alpha::{catalog, FanData, NamedFan};

/// Product fan in the direct sum of the two lattices.
pub fn product(a: &FanData, b: &FanData) -> FanData {
    let (da, db) = (a.dim(), b.dim());
    let pad = |r: &[_], before: usize, after: usize| {
        let mut v = vec![0.into(); before];
        v.extend(r.iter().cloned());
        v.extend(std::iter::repeat(0.into()).take(after));
        v
    };
    let mut rays: Vec<Vec<num_bigint::BigInt>> = a.rays().iter().map(|r| pad(r, 0, db)).collect();
    rays.extend(b.rays().iter().map(|r| pad(r, da, 0)));
    let offset = a.rays().len();
    let cones = a
        .max_cones()
        .iter()
        .flat_map(|ca| b.max_cones().iter().map(move |cb| ca.iter().copied().chain(cb.iter().map(|j| j + offset)).collect()))
        .collect();
    FanData::new(da + db, rays, cones).expect("product of fans")
}

pub fn p1() -> FanData {
    FanData::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap()
}

/// The catalog surfaces followed by a few threefolds.
pub fn fixtures() -> Vec<(String, FanData)> {
    let surfaces: Vec<NamedFan> = catalog();
    let mut out: Vec<(String, FanData)> = surfaces.iter().map(|e| (e.name.clone(), e.fan.clone())).collect();
    for e in &surfaces {
        if e.name == "dp2" || e.name == "dp3" {
            out.push((format!("p1x{}", e.name), product(&p1(), &e.fan)));
        }
    }
    out.push(("p1^3".into(), product(&product(&p1(), &p1()), &p1())));
    out
}
