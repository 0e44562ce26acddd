// The group of a Pell conic over a small field, and its generalized form.

use pell::conic::{self, ConicParams, PellPoint};
use pell::Field;

fn main() {
    let f = Field::from_u64(11).unwrap();
    let d = f.elem(2u8);
    let classic = ConicParams::classic(&f, d.clone()).unwrap();

    let points = classic.enumerate().unwrap();
    println!("x^2 - 2y^2 = 1 over F_11 has {} points (chi(2) = {})", points.len(), f.chi(&d).as_i8());

    let g = PellPoint::from_u64(&f, 3, 2);
    let mut acc = PellPoint::one(&f);
    for k in 1..=12 {
        acc = conic::brahmagupta(&f, &acc, &g, &d);
        println!("  G^{k:<2} = ({}, {})", acc.x, acc.y);
    }

    // x^2 - 2y^2 = 7, identity (3, 1)
    let c = f.elem(7u8);
    let gen = ConicParams::new(&f, d.clone(), c, PellPoint::from_u64(&f, 3, 1)).unwrap();
    println!("x^2 - 2y^2 = 7 has {} points", gen.enumerate().unwrap().len());
    let image = gen.phi(&g);
    println!("phi(G) = ({}, {}), back: {:?}", image.x, image.y, gen.phi_inv(&image) == g);
    let square = gen.gen_brahmagupta(&image, &image);
    assert_eq!(gen.phi_inv(&square), conic::brahmagupta(&f, &g, &g, &d));
    println!("phi(G) * phi(G) = ({}, {}) = phi(G^2)", square.x, square.y);
}
