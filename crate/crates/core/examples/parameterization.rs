// Points of a Pell conic as parameters, with the induced product.

use pell::conic::{self, ConicParams};
use pell::param::{self, Parameter};
use pell::Field;

fn main() {
    let f = Field::from_u64(11).unwrap();
    let d = f.elem(2u8);
    let classic = ConicParams::classic(&f, d.clone()).unwrap();

    for pt in classic.enumerate().unwrap() {
        let m = param::param_of_point(&pt, &classic).unwrap();
        assert_eq!(param::point_of_param(&m, &classic).unwrap(), pt);
        println!("({:>2}, {:>2}) <-> {m:?}", pt.x.value(), pt.y.value());
    }

    let (u, v) = (Parameter::finite(&f, 3u8), Parameter::finite(&f, 4u8));
    let w = param::param_mul(&f, &u, &v, &d);
    println!("3 ⊙ 4 = {w:?} (d = 2)");

    let p = param::point_of_param(&u, &classic).unwrap();
    let q = param::point_of_param(&v, &classic).unwrap();
    let pq = conic::brahmagupta(&f, &p, &q, &d);
    assert_eq!(param::param_of_point(&pq, &classic).unwrap(), w);
    println!("matching point product: ({}, {})", pq.x, pq.y);
    println!("inverse of 3 is {:?}", param::param_inverse(&f, &u));
}
