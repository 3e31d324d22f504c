//! Two-parameter Nelder–Mead minimizer.

/// Outcome of [`nelder_mead_2d`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexResult {
    pub x: [f64; 2],
    pub value: f64,
    pub evals: usize,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `start` with an axis-aligned initial simplex of edge `step`.
///
/// Stops once every vertex lies within `tol` (max-norm) of the best vertex,
/// or after `max_iter` iterations.
pub fn nelder_mead_2d<F>(
    mut f: F,
    start: [f64; 2],
    step: f64,
    tol: f64,
    max_iter: usize,
) -> SimplexResult
where
    F: FnMut([f64; 2]) -> f64,
{
    let mut evals = 0usize;
    let mut eval = |x: [f64; 2]| {
        evals += 1;
        f(x)
    };
    let mut simplex = [
        start,
        [start[0] + step, start[1]],
        [start[0], start[1] + step],
    ];
    let mut values = [eval(simplex[0]), eval(simplex[1]), eval(simplex[2])];
    let mut iterations = 0;
    let mut converged = false;

    loop {
        // stable order: ties keep their previous ranking
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = [simplex[order[0]], simplex[order[1]], simplex[order[2]]];
        values = [values[order[0]], values[order[1]], values[order[2]]];

        let spread = simplex[1..]
            .iter()
            .flat_map(|v| [(v[0] - simplex[0][0]).abs(), (v[1] - simplex[0][1]).abs()])
            .fold(0.0, f64::max);
        if spread < tol {
            converged = true;
            break;
        }
        if iterations >= max_iter {
            break;
        }
        iterations += 1;

        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let along = |t: f64| {
            [
                centroid[0] + t * (simplex[2][0] - centroid[0]),
                centroid[1] + t * (simplex[2][1] - centroid[1]),
            ]
        };

        let xr = along(-REFLECT);
        let fr = eval(xr);
        if fr < values[0] {
            let xe = along(-EXPAND);
            let fe = eval(xe);
            if fe < fr {
                simplex[2] = xe;
                values[2] = fe;
            } else {
                simplex[2] = xr;
                values[2] = fr;
            }
            continue;
        }
        if fr < values[1] {
            simplex[2] = xr;
            values[2] = fr;
            continue;
        }
        let (xc, fc, accept) = if fr < values[2] {
            let xc = along(-CONTRACT);
            let fc = eval(xc);
            (xc, fc, fc <= fr)
        } else {
            let xc = along(CONTRACT);
            let fc = eval(xc);
            (xc, fc, fc < values[2])
        };
        if accept {
            simplex[2] = xc;
            values[2] = fc;
            continue;
        }
        for k in 1..3 {
            simplex[k] = [
                simplex[0][0] + SHRINK * (simplex[k][0] - simplex[0][0]),
                simplex[0][1] + SHRINK * (simplex[k][1] - simplex[0][1]),
            ];
            values[k] = eval(simplex[k]);
        }
    }

    SimplexResult {
        x: simplex[0],
        value: values[0],
        evals,
        iterations,
        converged,
    }
}
