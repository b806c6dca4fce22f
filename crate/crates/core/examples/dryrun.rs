use resfluor::analysis::find_peaks;
use resfluor::pipeline::{run_scenario, run_sweep};
use resfluor::presets::preset;
use resfluor::Scenario;

fn main() {
    let which: String = std::env::args().nth(1).unwrap_or_default();

    if which == "1" {
        // criterion 1: Mollow baseline
        let cfg: Scenario = preset("fig1").unwrap();
        let r = run_scenario(&cfg).unwrap();
        println!("fig1 peaks (thr 1e-3):");
        for p in &r.peaks.peaks {
            println!("  pos {:.4} h {:.5e} fwhm {:.4} res ({},{})", p.position, p.height, p.fwhm, p.left_resolved, p.right_resolved);
        }
    }

    if which == "2" {
        // criterion 2: fig3 LF peak + non-polar null
        let cfg: Scenario = preset("fig3").unwrap();
        let r = run_scenario(&cfg).unwrap();
        println!("fig3 LF peaks:");
        for p in &r.peaks.peaks {
            println!("  pos {:.4} h {:.5e} fwhm {:.4}", p.position, p.height, p.fwhm);
        }
        let mut null = cfg.clone();
        null.name = Some("fig3-nonpolar".into());
        null.drives[0].delta_a = 0.0;
        let rl = run_scenario(&null).unwrap();
        let mut hf = null.clone();
        hf.window = resfluor::config::Window::Hf;
        let rh = run_scenario(&hf).unwrap();
        println!("nonpolar: LF max {:.3e}, HF max {:.3e}, ratio {:.3e}", rl.series.max_value(), rh.series.max_value(), rl.series.max_value()/rh.series.max_value());
    }

    if which == "3" {
        // criterion 3: fig5 splitting
        let cfg: Scenario = preset("fig5").unwrap();
        let r = run_scenario(&cfg).unwrap();
        println!("fig5 peaks:");
        for p in &r.peaks.peaks {
            println!("  pos {:.4} h {:.5e} fwhm {:.4} res ({},{})", p.position, p.height, p.fwhm, p.left_resolved, p.right_resolved);
        }
        let k = r.series.omega.iter().position(|&w| (w - 5000.0).abs() < 0.026).unwrap();
        println!("S(5000) = {:.5e}", r.series.s[k]);
    }

    if which == "4" {
        // criterion 4: fig6 equidistant
        let cfg: Scenario = preset("fig6").unwrap();
        let r = run_scenario(&cfg).unwrap();
        for thr in [1e-3, 1e-2, 3e-2] {
            let rep = find_peaks(&r.series, thr).unwrap();
            let pos: Vec<String> = rep.peaks.iter().map(|p| format!("{:.2}({:.2e})", p.position - 5000.0, p.height)).collect();
            println!("fig6 thr {thr:.0e}: {} peaks: {}", rep.peaks.len(), pos.join(" "));
        }
    }

    if which == "5" {
        // criterion 5: fig8 comb positions vs rabi
        for rabi in [15.0, 20.0, 25.0] {
            let mut cfg: Scenario = preset("fig8").unwrap();
            cfg.name = Some(format!("fig8@{rabi}"));
            cfg.drives[0].rabi = rabi;
            cfg.drives[1].rabi = rabi;
            let r = run_scenario(&cfg).unwrap();
            let rep = find_peaks(&r.series, 1e-2).unwrap();
            let pos: Vec<String> = rep.peaks.iter().map(|p| format!("{:+.2}({:.1e})", p.position - 5000.0, p.height)).collect();
            println!("fig8 rabi {rabi}: {}", pos.join(" "));
        }
    }

    if which == "6" {
        // criterion 6: fig9 LF comb, delta_a 10 vs 20
        for da in [10.0, 20.0] {
            let mut cfg: Scenario = preset("fig9").unwrap();
            cfg.name = Some(format!("fig9@{da}"));
            cfg.drives[0].delta_a = da;
            cfg.drives[1].delta_a = da;
            let r = run_scenario(&cfg).unwrap();
            let rep = find_peaks(&r.series, 1e-2).unwrap();
            let pos: Vec<String> = rep.peaks.iter().map(|p| format!("{:.2}({:.2e})", p.position, p.height)).collect();
            println!("fig9 da {da}: {}", pos.join(" "));
        }
    }

    if which == "7" {
        // criterion 7: fig10 sweep (coarser grid for the dry run)
        let mut cfg: Scenario = preset("fig10").unwrap();
        cfg.grid_step = 0.1;
        let sw = run_sweep(&cfg).unwrap();
        println!("fig10 sweep: {} values, {} failures", sw.values.len(), sw.failures.len());
        for (v, series) in sw.series() {
            let rep = find_peaks(series, 3e-2).unwrap();
            let pos: Vec<String> = rep.peaks.iter().map(|p| format!("{:+.1}({:.2e})", p.position - 5000.0, p.height)).collect();
            println!("  da3 {v:4}: {}", pos.join(" "));
        }
    }

    if which == "7b" {
        // criterion 7b: rabi3 independence at da3 = 20
        let mut base: Scenario = preset("fig10").unwrap();
        base.sweep = None;
        base.drives[2].delta_a = 20.0;
        let mut runs = Vec::new();
        for r3 in [10.0, 20.0, 30.0] {
            let mut c = base.clone();
            c.name = Some(format!("fig10@r3={r3}"));
            c.drives[2].rabi = r3;
            runs.push(run_scenario(&c).unwrap());
        }
        let mx = runs[1].series.max_value();
        for (i, r3) in [10.0, 30.0].iter().enumerate() {
            let d = runs[if i == 0 {0} else {2}].series.s.iter().zip(&runs[1].series.s).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
            println!("fig10 rabi3 {r3} vs 20: max pointwise diff {:.3e} rel {:.3e}", d, d / mx);
        }
    }

    if which == "8" {
        // criterion 8: phase independence of fig5
        let mut runs = Vec::new();
        for phi in [0.0, std::f64::consts::PI / 3.0, std::f64::consts::PI] {
            let mut c: Scenario = preset("fig5").unwrap();
            c.name = Some(format!("fig5@phi={phi:.3}"));
            c.drives[1].phi = phi;
            runs.push(run_scenario(&c).unwrap());
        }
        let mx = runs[0].series.max_value();
        for i in [1, 2] {
            let d = runs[i].series.s.iter().zip(&runs[0].series.s).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
            println!("fig5 phase {} vs 0: max diff {:.3e} rel {:.3e}", i, d, d / mx);
        }
    }
}
