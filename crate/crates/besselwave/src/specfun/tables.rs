//! Frozen reference values for the special-function layer.
//!
//! Computed independently with 50-digit arithmetic (mpmath) and
//! frozen here at 17 significant digits (exact `f64` round-trip).

/// (x, Gamma(x))
pub const GAMMA_REFERENCE: &[(f64, f64)] = &[
    (0.001, 999.4237724845955),
    (0.25, 3.625609908221908),
    (0.5, 1.772453850905516),
    (1.0, 1.0),
    (1.5, 0.886226925452758),
    (1.7, 0.9086387328532904),
    (2.0, 1.0),
    (3.75, 4.422988410460251),
    (7.5, 1871.2543057977884),
    (10.5, 1133278.3889487856),
    (20.25, 2.5604013332847648e+17),
    (101.3, 3.722616312784273e+158),
    (170.5, 5.56209241456e+305),
    (-0.5, -3.544907701811032),
    (-1.5, 2.363271801207355),
    (-2.25, -1.7428148657282527),
    (-6.7, -0.0014019710846797516),
];

/// (nu, z, J_nu(z))
pub const BESSEL_J_REFERENCE: &[(f64, f64, f64)] = &[
    (-0.5, 0.05, 3.563788851169038),
    (-0.5, 0.5, 0.9902458802434049),
    (-0.5, 1.0, 0.4310988680183761),
    (-0.5, 2.5, -0.40427830223905686),
    (-0.5, 5.0, 0.1012177091851084),
    (-0.5, 8.0, -0.041044801740333064),
    (-0.5, 11.5, 0.11371354862739493),
    (-0.5, 12.5, 0.2251789582377725),
    (-0.5, 14.0, 0.02915833921107068),
    (-0.5, 20.0, 0.07280690478506185),
    (-0.5, 35.0, -0.12187835265849536),
    (-0.5, 50.0, 0.10888475635053954),
    (-0.25, 0.05, 2.050544525903637),
    (-0.25, 0.5, 1.059599593527523),
    (-0.25, 1.0, 0.6693848172615745),
    (-0.25, 2.5, -0.24096786341576948),
    (-0.25, 5.0, -0.04387451822706009),
    (-0.25, 8.0, 0.07200852207876934),
    (-0.25, 11.5, 0.02432454107814273),
    (-0.25, 12.5, 0.20149743092072114),
    (-0.25, 14.0, 0.10897780412579271),
    (-0.25, 20.0, 0.13015401042690347),
    (-0.25, 35.0, -0.13471236323247135),
    (-0.25, 50.0, 0.0891355224181288),
    (0.0, 0.05, 0.9993750976494686),
    (0.0, 0.5, 0.9384698072408129),
    (0.0, 1.0, 0.7651976865579666),
    (0.0, 2.5, -0.048383776468198),
    (0.0, 5.0, -0.1775967713143383),
    (0.0, 8.0, 0.1716508071375539),
    (0.0, 11.5, -0.06765394811166522),
    (0.0, 12.5, 0.1468840547004211),
    (0.0, 14.0, 0.17107347611045867),
    (0.0, 20.0, 0.16702466434058316),
    (0.0, 35.0, -0.12684568275631258),
    (0.0, 50.0, 0.055812327669251816),
    (0.3333333333333333, 0.05, 0.32729164001955063),
    (0.3333333333333333, 0.5, 0.672830829497946),
    (0.3333333333333333, 1.0, 0.730876402169448),
    (0.3333333333333333, 2.5, 0.1983209334186081),
    (0.3333333333333333, 5.0, -0.30642046380026416),
    (0.3333333333333333, 8.0, 0.25977616110834967),
    (0.3333333333333333, 11.5, -0.17046364682954446),
    (0.3333333333333333, 12.5, 0.04258737280722331),
    (0.3333333333333333, 14.0, 0.21168092934398272),
    (0.3333333333333333, 20.0, 0.176060580012939),
    (0.3333333333333333, 35.0, -0.08711800939776547),
    (0.3333333333333333, 50.0, -0.0005722668077178142),
    (0.5, 0.05, 0.17833808240219742),
    (0.5, 0.5, 0.540973789934528),
    (0.5, 1.0, 0.6713967071418031),
    (0.5, 2.5, 0.3020049060623657),
    (0.5, 5.0, -0.3421679847981618),
    (0.5, 8.0, 0.27909280857099206),
    (0.5, 11.5, -0.2059792949157923),
    (0.5, 12.5, -0.014967249458668383),
    (0.5, 14.0, 0.21124069716285923),
    (0.5, 20.0, 0.16288076385502986),
    (0.5, 35.0, -0.05774775758945885),
    (0.5, 50.0, -0.029605831888924614),
    (1.0, 0.05, 0.0249921883137597),
    (1.0, 0.5, 0.2422684576748739),
    (1.0, 1.0, 0.4400505857449335),
    (1.0, 2.5, 0.49709410246427405),
    (1.0, 5.0, -0.32757913759146523),
    (1.0, 8.0, 0.23463634685391463),
    (1.0, 11.5, -0.22837862066532347),
    (1.0, 12.5, -0.16548380461475973),
    (1.0, 14.0, 0.13337515469879324),
    (1.0, 20.0, 0.06683312417585005),
    (1.0, 35.0, 0.04399094217962564),
    (1.0, 50.0, -0.09751182812517514),
    (1.5, 0.05, 0.002972796874910147),
    (1.5, 0.5, 0.0917016996256513),
    (1.5, 1.0, 0.240297839123427),
    (1.5, 2.5, 0.5250802646640031),
    (1.5, 5.0, -0.16965130614474075),
    (1.5, 8.0, 0.07593140281170707),
    (1.5, 11.5, -0.1316247916635508),
    (1.5, 12.5, -0.22637633819446598),
    (1.5, 14.0, -0.014069717985152164),
    (1.5, 20.0, -0.06466286659231035),
    (1.5, 35.0, 0.12022841672736798),
    (1.5, 50.0, -0.10947687298831804),
    (2.0, 0.05, 0.00031243490091938445),
    (2.0, 0.5, 0.03060402345868264),
    (2.0, 1.0, 0.11490348493190047),
    (2.0, 2.5, 0.44605905843961724),
    (2.0, 5.0, 0.046565116277752214),
    (2.0, 8.0, -0.11299172042407525),
    (2.0, 11.5, 0.02793592712639158),
    (2.0, 12.5, -0.17336146343878267),
    (2.0, 14.0, -0.15201988258205962),
    (2.0, 20.0, -0.16034135192299814),
    (2.0, 35.0, 0.12935945088086262),
    (2.0, 50.0, -0.05971280079425882),
    (3.0, 0.05, 2.6037597910554323e-06),
    (3.0, 0.5, 0.002563729994587244),
    (3.0, 1.0, 0.019563353982668407),
    (3.0, 2.5, 0.21660039103911352),
    (3.0, 5.0, 0.364831230613667),
    (3.0, 8.0, -0.2911322070659523),
    (3.0, 11.5, 0.2380954648831988),
    (3.0, 12.5, 0.11000813631434926),
    (3.0, 14.0, -0.176809406865096),
    (3.0, 20.0, -0.09890139456044968),
    (3.0, 35.0, -0.029207004936098485),
    (3.0, 50.0, 0.09273480406163444),
];

/// (nu, z, Y_nu(z))
pub const BESSEL_Y_REFERENCE: &[(f64, f64, f64)] = &[
    (0.3, 0.2, -1.4702985252610772),
    (0.3, 1.0, -0.24570419535649946),
    (0.3, 5.0, -0.19705687911614495),
    (0.3, 11.0, -0.07367175522286121),
    (0.3, 13.0, -0.1631330233971678),
    (0.3, 30.0, -0.06549777194112158),
    (0.75, 0.2, -2.2984771839580085),
    (0.75, 1.0, -0.6218694174429746),
    (0.75, 5.0, 0.026594880214844855),
    (0.75, 11.0, 0.08797452449575839),
    (0.75, 13.0, -0.2210849952133872),
    (0.75, 30.0, 0.03358513094223687),
    (1.5, 0.2, -9.097252829020782),
    (1.5, 1.0, -1.1024955751601793),
    (1.5, 5.0, 0.32192444296114014),
    (1.5, 11.0, 0.24047210020659363),
    (1.5, 13.0, -0.10842724880730138),
    (1.5, 30.0, 0.1431806436837722),
    (2.3, 0.2, -74.67733655909949),
    (2.3, 1.0, -2.259369727906119),
    (2.3, 5.0, 0.335540080653554),
    (2.3, 11.0, 0.12655256320100183),
    (2.3, 13.0, 0.1312223080089077),
    (2.3, 30.0, 0.0766236852930996),
];

/// (nu, z, G_nu(z)) with G_nu(z) = z^{-nu} J_nu(z); G_nu(0) = 1/(2^nu Gamma(nu+1))
pub const BESSEL_G_REFERENCE: &[(f64, f64, f64)] = &[
    (-0.45, 1e-08, 0.8452569416737055),
    (-0.45, 0.75, 0.6387653557961479),
    (-0.45, 13.0, 0.6584607308767453),
    (0.0, 2.0, 0.22389077914123567),
    (0.5, 1e-06, 0.7978845608027324),
    (0.5, 9.0, 0.036535886288429006),
    (0.5, 150.0, -0.0038025924405532432),
    (1.0, 0.3, 0.49439605424368005),
    (1.0, 40.0, 0.003150957950939625),
    (2.5, 5.0, 0.004299998095408349),
    (2.5, 2000.0, -9.270297743885528e-11),
];

