//! `p_i` grid specifications: `start:stop:step`, `start:stop:log10xN` or a
//! comma-separated list.

fn tidy(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let scale = 10f64.powi(11 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

fn number(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("invalid number `{s}` in grid"))
}

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let grid = match parts.as_slice() {
        [single] => single.split(',').map(number).collect::<Result<Vec<_>, _>>()?,
        [start, stop, step] => {
            let (a, b) = (number(start)?, number(stop)?);
            if a > b {
                return Err(format!("grid start {a} exceeds stop {b}"));
            }
            if let Some(count) = step.strip_prefix("log10x") {
                let n: usize = count.parse().map_err(|_| format!("invalid point count `{count}`"))?;
                if n == 0 || a <= 0.0 {
                    return Err("log grid needs a positive start and at least one point".into());
                }
                if n == 1 {
                    vec![a]
                } else {
                    let (la, lb) = (a.log10(), b.log10());
                    (0..n).map(|i| tidy(10f64.powf(la + (lb - la) * i as f64 / (n - 1) as f64))).collect()
                }
            } else {
                let h = number(step)?;
                if h <= 0.0 || !h.is_finite() {
                    return Err(format!("grid step must be positive, got {h}"));
                }
                let n = ((b - a) / h + 1e-9).floor() as usize;
                (0..=n).map(|i| tidy(a + h * i as f64)).collect()
            }
        }
        _ => return Err(format!("unrecognised grid `{spec}`")),
    };
    if grid.is_empty() {
        return Err("empty grid".into());
    }
    if let Some(p) = grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(format!("grid point {p} outside [0, 1]"));
    }
    Ok(grid)
}
