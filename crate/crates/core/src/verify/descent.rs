//! R-polynomial identities along a matching.
//!
//! For every maximal matching φ of every corpus group, and every pair x, y
//! of elements raised by φ (x ⋖ φ(x), y ⋖ φ(y)) within the reliable part of
//! the ball, the suite checks the two transport identities
//!
//! ```text
//! R[φ(x), φ(y)] = R[x, y]
//! R[x, φ(y)]    = (q−1)·R[x, y] + q·R[φ(x), y]
//! ```
//!
//! Both identities depend only on the four corner elements, so a corner
//! quadruple shared by several matchings is checked once per case.

use std::collections::HashSet;

use crate::coxeter::{ElementId, GroupBall};
use crate::poly::{IntPoly, PolyCtx};
use crate::verify::report::{CaseReport, Recorder};
use crate::verify::support::each_matching;
use crate::verify::CorpusCase;

pub fn run(case: &CorpusCase) -> CaseReport {
    let mut rec = Recorder::new(&case.name, &case.matrix);
    // The pair loop is quadratic in the ball, so this suite runs on the
    // polynomial ball rather than the larger matching ball.
    let ball = match GroupBall::build(case.matrix.clone(), case.poly_bound) {
        Ok(ball) => ball,
        Err(e) => {
            rec.error("build_ball", None, &e);
            return rec.finish();
        }
    };
    let mut ctx = PolyCtx::new(&ball);
    let q_minus_one = IntPoly::q_minus_one();
    let q = IntPoly::monomial(1, 1);
    let mut seen: HashSet<(ElementId, ElementId, ElementId, ElementId)> = HashSet::new();

    each_matching(&ball, &mut rec, |rec, family, pm| {
        let label = family.label(ball.matrix());
        let reliable = pm.reliable_bound();
        let raised: Vec<(ElementId, ElementId)> = pm
            .pairs()
            .into_iter()
            .filter(|&(_, top)| ball.len(top) as u32 <= reliable)
            .collect();
        for &(x, fx) in &raised {
            for &(y, fy) in &raised {
                if !seen.insert((x, fx, y, fy)) {
                    continue;
                }
                let r_xy = ctx.r_polynomial(x, y);
                let r_fxfy = ctx.r_polynomial(fx, fy);
                rec.check(
                    "raised_pair_transport",
                    Some(&label),
                    Some(format!("x={} y={}", ball.display(x), ball.display(y))),
                    r_fxfy == r_xy,
                    || format!("R[φx,φy] = {r_fxfy}, R[x,y] = {r_xy}"),
                );
                let lhs = ctx.r_polynomial(x, fy);
                let r_fxy = ctx.r_polynomial(fx, y);
                let rhs = q_minus_one.mul(&r_xy).add(&q.mul(&r_fxy));
                rec.check(
                    "mixed_pair_recursion",
                    Some(&label),
                    Some(format!("x={} y={}", ball.display(x), ball.display(y))),
                    lhs == rhs,
                    || {
                        format!(
                            "R[x,φy] = {lhs}, (q−1)·R[x,y] + q·R[φx,y] = {rhs} \
                             (R[x,y] = {r_xy}, R[φx,y] = {r_fxy})"
                        )
                    },
                );
            }
        }
    });
    rec.finish()
}
