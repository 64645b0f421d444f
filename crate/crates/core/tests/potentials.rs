use layerpot::oracle::{adaptive_potentials, gl_potentials};
use layerpot::shapefn::MonomialExpansion;
use layerpot::{evaluate_monomials, ElementGeometry, EvalRequest, HelmholtzRoute, Kernel, Vec3, C64};

fn geom() -> ElementGeometry {
    ElementGeometry::from_arrays([[0.1, 0.0, 0.2], [1.2, 0.3, 0.0], [0.4, 1.1, 0.5]]).unwrap()
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn check(kernel: Kernel, p: Vec3, n: Vec3, order: usize, tol: f64, use_gl: bool) {
    let g = geom();
    let req = EvalRequest::new(g.clone(), p, kernel, order)
        .with_normal(n)
        .with_route(HelmholtzRoute::Recursion);
    let m = evaluate_monomials(&req).unwrap();
    for c in 0..=order {
        for b in 0..=order - c {
            let dens = MonomialExpansion::monomial(order, b, c);
            let refv = if use_gl {
                gl_potentials(&g, &dens, kernel, &p, &n, 40)
            } else {
                adaptive_potentials(&g, &dens, kernel, &p, &n, 1e-12).unwrap().values
            };
            let got = m.get(b, c).as_array();
            for i in 0..4 {
                let e = rel(got[i].unwrap(), refv[i]);
                assert!(e < tol, "{kernel:?} ({b},{c}) pot {i}: {} vs {} rel {e:e}", got[i].unwrap(), refv[i]);
            }
        }
    }
}

#[test]
fn far_point_matches_quadrature() {
    let n = Vec3::new(0.3, -0.5, 0.8).normalize();
    let p = Vec3::new(0.9, 1.7, 2.1);
    check(Kernel::Laplace, p, n, 3, 1e-10, true);
    check(Kernel::Helmholtz { k: 0.8 }, p, n, 3, 1e-10, true);
}

#[test]
fn near_point_matches_oracle() {
    let g = geom();
    let c = (g.vertices[0] + g.vertices[1] + g.vertices[2]) / 3.0;
    let n = Vec3::new(0.3, -0.5, 0.8).normalize();
    let p = c + g.k_hat * 0.05;
    check(Kernel::Laplace, p, n, 3, 1e-9, false);
    check(Kernel::Helmholtz { k: 1.3 }, p, n, 3, 1e-9, false);
}
