use qlift::forms::{eta_quotient_series, EtaQuotient};
use qlift::shimura::{s_r_pipeline, PipelineMode, PipelinePath};
use std::time::Instant;

#[test]
fn profile() {
    let cat = qlift::forms::fixtures_examples(7502);
    let f = cat.ex2.base_series(22504);

    let t = Instant::now();
    let _ = s_r_pipeline(3, &f, 6, PipelineMode::Eta3R, PipelinePath::Direct, None).unwrap();
    eprintln!("pipeline no-basis: {:?}", t.elapsed());

    let t = Instant::now();
    let _ = s_r_pipeline(3, &f, 6, PipelineMode::Eta3R, PipelinePath::Direct, Some(&cat.ex2.g_basis))
        .unwrap();
    eprintln!("pipeline with basis: {:?}", t.elapsed());

    let t = Instant::now();
    let ep = eta_quotient_series(&EtaQuotient::new(&[(1, 9)]), 22504).unwrap();
    eprintln!("eta^9 @22504: {:?} ({} terms)", t.elapsed(), ep.support().count());

    let t = Instant::now();
    let quo = eta_quotient_series(&EtaQuotient::new(&[(1, 9), (3, -3)]), 22504).unwrap();
    eprintln!("eta^9/eta(3z)^3 @22504: {:?} ({} terms)", t.elapsed(), quo.support().count());

    let t = Instant::now();
    let w = &quo * &f;
    eprintln!("w = quo*f: {:?} ({} terms)", t.elapsed(), w.support().count());

    let t = Instant::now();
    let tgt = w.op_u_class(3);
    eprintln!("w|U3: {:?} (prec {})", t.elapsed(), tgt.prec());
}
