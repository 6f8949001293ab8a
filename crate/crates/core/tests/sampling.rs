mod common;

use common::*;
use frechet_core::exact::to_f64;
use frechet_core::model::Density;
use frechet_core::sampler::{empirical_moments, sample};

#[test]
fn cell_frequencies_match_small_support() {
    let f = Density::new(vec![r(1, 10), r(3, 10), r(1, 5), r(2, 5)]).unwrap();
    let n = 1_000_000;
    let batch = sample(&f, n, 99).unwrap();
    for (count, p) in batch.counts().iter().zip(f.values()) {
        let p = to_f64(p);
        let se = (p * (1.0 - p) / n as f64).sqrt();
        let z = (*count as f64 / n as f64 - p) / se;
        assert!(z.abs() <= 4.0, "cell p = {p}: z = {z}");
    }
}

#[test]
fn independence_pair_moment() {
    let f = Density::new(vec![r(1, 4); 4]).unwrap();
    let n = 100_000;
    let mu = to_f64(&empirical_moments(&sample(&f, n, 3).unwrap(), 2).unwrap()[0]);
    assert!((mu - 0.25).abs() < 4.0 * (0.25 * 0.75 / n as f64).sqrt());
}

#[test]
fn csv_export_lists_every_draw() {
    let f = Density::point_mass(3, 0b101).unwrap();
    let csv = sample(&f, 4, 0).unwrap().to_csv();
    assert_eq!(csv, "x_1,x_2,x_3\n1,0,1\n1,0,1\n1,0,1\n1,0,1\n");
}
