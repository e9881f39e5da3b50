use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valuscope")).args(args).output().expect("binary runs")
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

/// Twelve years of weekday closes: earnings compounding at 12% a year
/// under a P/E cycling between 11 and 28, with P/E coverage starting on
/// row 300 and deterministic noise.
pub fn index_csv(rows: usize) -> String {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut noise = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut text = String::from("Date,Close,PE\n");
    let mut day = chrono::NaiveDate::from_ymd_opt(2000, 1, 3).unwrap();
    let mut t = 0;
    while t < rows {
        if chrono::Datelike::weekday(&day).number_from_monday() <= 5 {
            let years = t as f64 / 252.0;
            let eps = 50.0 * 1.12f64.powf(years);
            let pe = 19.5 - 8.5 * (2.0 * std::f64::consts::PI * years / 3.0).cos() + noise();
            let close = eps * pe * (1.0 + 0.02 * noise());
            if t >= 300 {
                text.push_str(&format!("{day},{close:.2},{pe:.2}\n"));
            } else {
                text.push_str(&format!("{day},{close:.2},\n"));
            }
            t += 1;
        }
        day = day.succ_opt().unwrap();
    }
    text
}
