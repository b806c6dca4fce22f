use resfluor::pipeline::run_scenario;
use resfluor::presets::preset;
use resfluor::Scenario;

fn main() {
    let mut runs = Vec::new();
    for r3 in [10.0, 20.0, 30.0] {
        let mut c: Scenario = preset("fig10").unwrap();
        c.sweep = None;
        c.name = Some(format!("fig10@r3={r3}"));
        c.drives[2].delta_a = 20.0;
        c.drives[2].rabi = r3;
        c.window = resfluor::config::Window::Custom(4930.0, 5070.0);
        runs.push(run_scenario(&c).unwrap());
    }
    let mx = runs[1].series.max_value();
    for (i, r3) in [(0usize, 10.0), (2, 30.0)] {
        let d = runs[i].series.s.iter().zip(&runs[1].series.s).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
        println!("fig10 rabi3 {r3} vs 20 (common grid): max diff {:.3e} rel {:.3e}", d, d / mx);
    }
}
