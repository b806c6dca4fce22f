use resfluor::analysis::find_peaks;
use resfluor::pipeline::run_scenario;
use resfluor::presets::preset;
use resfluor::Scenario;

fn main() {
    let mut prev: Vec<(f64, f64)> = Vec::new();
    for k in 0..=8 {
        let d3 = 2.0 * k as f64;
        let mut cfg: Scenario = preset("fig10").unwrap();
        cfg.sweep = None;
        cfg.name = Some(format!("fig10@{d3}"));
        cfg.drives[2].delta_a = d3;
        cfg.window = resfluor::config::Window::Custom(4930.0, 5070.0);
        cfg.grid_step = 0.1;
        let r = run_scenario(&cfg).unwrap();
        let rep = find_peaks(&r.series, 1e-3).unwrap();
        let main: Vec<(f64, f64)> = rep.peaks.iter().filter(|p| p.height > 0.002).map(|p| (p.position, p.height)).collect();
        let mut line = format!("d3 {d3:4}: ");
        for (i, (pos, h)) in main.iter().enumerate() {
            let up = prev.get(i).map(|(_, ph)| if h > ph { "^UP" } else { "" }).unwrap_or("");
            line += &format!("{:+.2}:{:.6e}{up}  ", pos - 5000.0, h);
        }
        println!("{line}");
        prev = main;
    }
}
