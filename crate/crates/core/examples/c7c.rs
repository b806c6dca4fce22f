use resfluor::analysis::find_peaks;
use resfluor::pipeline::run_scenario;
use resfluor::presets::preset;
use resfluor::Scenario;

fn main() {
    let mut runs = Vec::new();
    for (r3, lmax) in [(10.0, None), (20.0, None), (30.0, None), (30.0, Some(534usize))] {
        let mut c: Scenario = preset("fig10").unwrap();
        c.sweep = None;
        c.name = Some(format!("fig10@r3={r3}"));
        c.drives[2].delta_a = 20.0;
        c.drives[2].rabi = r3;
        c.l_max = lmax;
        c.window = resfluor::config::Window::Custom(4930.0, 5070.0);
        runs.push((r3, lmax, run_scenario(&c).unwrap()));
    }
    // truncation robustness of the rabi3 = 30 run
    let d: f64 = runs[2].2.series.s.iter().zip(&runs[3].2.series.s).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("rabi3=30: l_max 267 vs 534 spectra diff {:.3e}", d);
    for (r3, lmax, r) in &runs[..3] {
        let rep = find_peaks(&r.series, 1e-2).unwrap();
        let desc: Vec<String> = rep.peaks.iter().filter(|p| p.height > 2e-3)
            .map(|p| format!("{:+.3}:{:.4e}", p.position - 5000.0, p.height)).collect();
        println!("rabi3 {r3} lmax {lmax:?}: {}", desc.join("  "));
    }
}
