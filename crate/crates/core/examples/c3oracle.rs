use resfluor::floquet::{assemble_steady, solve_steady, Truncation};
use resfluor::model::{build_lattice, AtomParams, DriveComponent, LatticeOptions};
use resfluor::oracle;
use resfluor::regression::CorrelationSystem;

fn main() {
    // fig5 drive amplitudes at reduced carrier 200
    let atom = AtomParams::new(200.0, 1.0).unwrap();
    let d = |omega: f64, rabi: f64, da: f64| DriveComponent { omega, phi: 0.0, rabi, delta_a: da, delta_s: 0.0 };
    let drives = vec![d(200.0, 20.0, 20.0), d(20.0, 6.0, 6.0)];
    let lat = build_lattice(&atom, &drives, &[0], &LatticeOptions::default()).unwrap();
    let trunc = Truncation::default_for(&lat);
    let st = solve_steady(&assemble_steady(&atom, &drives, &lat, trunc).unwrap()).unwrap();
    let sys = CorrelationSystem::build(&atom, &drives, &lat, &st).unwrap();
    let grid: Vec<f64> = (0..=200).map(|k| 195.0 + 0.05 * k as f64).collect();
    let fl = sys.spectrum(&grid, "x").unwrap();
    let orc = oracle::oracle_spectrum(&atom, &drives, &lat, &grid, &oracle::OracleOptions { tau_max: 20.0, ..Default::default() }).unwrap();
    let kc = grid.iter().position(|&w| (w - 200.0).abs() < 0.026).unwrap();
    let kd = grid.iter().position(|&w| (w - 203.0).abs() < 0.026).unwrap();
    println!("floquet: S(200) = {:.4e}, S(203) = {:.4e}, ratio = {:.4}", fl.s[kc], fl.s[kd], fl.s[kc]/fl.s[kd]);
    println!("oracle : S(200) = {:.4e}, S(203) = {:.4e}, ratio = {:.4}", orc.s[kc], orc.s[kd], orc.s[kc]/orc.s[kd]);
}
