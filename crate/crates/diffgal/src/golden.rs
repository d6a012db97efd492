//! Golden polynomial data, double-entered: a cleaned expression string
//! and an independently extracted decimal coefficient list. The loader
//! parses the expression and compares it against the list before use.

pub struct GoldenPoly {
    pub name: &'static str,
    pub expr: &'static str,
    pub coeffs: &'static [&'static str],
}

pub const A26: GoldenPoly = GoldenPoly {
    name: "a26",
    expr: "521686412421099571093753036800 x^26 -724445324775545659452335063040 x^25 +45081769872830521912080728064 x^24 +616797192523902897669611192320 x^23 -636026962079787427490890252288 x^22 +359505820412663945726355570688 x^21 -142807225508285034141616963584 x^20 +43345424617004971574289235968 x^19 -10332892566359614848157876224 x^18 +1953967934450852091348254720 x^17 -296338746597146803591135232 x^16 +36761552740911534545901568 x^15 -3850023960384577768909952 x^14 +354446803792968575565792 x^13 -29645475671183771992224 x^12 +2252938824290334087840 x^11 -148605250583921845896 x^10 +7727889974481947660 x^9 -251264549473230968 x^8 -1305110830870633 x^7 +766418384173454 x^6 -52582954690298 x^5 +2099285510560 x^4 -54037012120 x^3 +873083400 x^2 -7854000 x +2800",
    coeffs: &["2800", "-7854000", "873083400", "-54037012120", "2099285510560", "-52582954690298", "766418384173454", "-1305110830870633", "-251264549473230968", "7727889974481947660", "-148605250583921845896", "2252938824290334087840", "-29645475671183771992224", "354446803792968575565792", "-3850023960384577768909952", "36761552740911534545901568", "-296338746597146803591135232", "1953967934450852091348254720", "-10332892566359614848157876224", "43345424617004971574289235968", "-142807225508285034141616963584", "359505820412663945726355570688", "-636026962079787427490890252288", "616797192523902897669611192320", "45081769872830521912080728064", "-724445324775545659452335063040", "521686412421099571093753036800"],
};

pub const A37: GoldenPoly = GoldenPoly {
    name: "a37",
    expr: "5629499534213120 x^37 +5348024557502464 x^36 -62874472922742784 x^35 +339080589913096192 x^34 +132348214635397120 x^33 +354600746294968320 x^32 +1383732497338073088 x^31 -269118080922157056 x^30 -1021414905992970240 x^29 +401943021895024640 x^28 +378516473892569088 x^27 -379126125978189824 x^26 -181955521970962432 x^25 +182991453503356928 x^24 +119809766351437824 x^23 -34528714733649920 x^22 -46719523456286720 x^21 -1865897472688128 x^20 +9861412040736768 x^19 +1690374175916032 x^18 -1285664678690816 x^17 -304716171767808 x^16 +112170181177344 x^15 +30517814178816 x^14 -7815766123264 x^13 -2274047571904 x^12 +456062896896 x^11 +150282885872 x^10 -10690267808 x^9 -6048942832 x^8 -486602112 x^7 +33772908 x^6 +25075632 x^5 +4670454 x^4 +13440 x^3 -69066 x^2 -5169 x -63",
    coeffs: &["-63", "-5169", "-69066", "13440", "4670454", "25075632", "33772908", "-486602112", "-6048942832", "-10690267808", "150282885872", "456062896896", "-2274047571904", "-7815766123264", "30517814178816", "112170181177344", "-304716171767808", "-1285664678690816", "1690374175916032", "9861412040736768", "-1865897472688128", "-46719523456286720", "-34528714733649920", "119809766351437824", "182991453503356928", "-181955521970962432", "-379126125978189824", "378516473892569088", "401943021895024640", "-1021414905992970240", "-269118080922157056", "1383732497338073088", "354600746294968320", "132348214635397120", "339080589913096192", "-62874472922742784", "5348024557502464", "5629499534213120"],
};

pub const A4: GoldenPoly = GoldenPoly {
    name: "a4",
    expr: "4352 x^4 +3607 x^3 -1678 x^2 +252 x -8",
    coeffs: &["-8", "252", "-1678", "3607", "4352"],
};

pub const A7: GoldenPoly = GoldenPoly {
    name: "a7",
    expr: "1 +x -24 x^2 -145 x^3 -192 x^4 +96 x^5 +128 x^7",
    coeffs: &["1", "1", "-24", "-145", "-192", "96", "0", "128"],
};

pub const F3R2_P15: GoldenPoly = GoldenPoly {
    name: "f3r2_p15",
    expr: "2 +9 x -99 x^2 -873 x^3 -1865 x^4 +12140 x^5 +83412 x^6 +238912 x^7 +375008 x^8 -1397504 x^9 -9548288 x^10 -17188864 x^11 -7581696 x^12 +2260992 x^13 -7471104 x^14 -786432 x^15",
    coeffs: &["2", "9", "-99", "-873", "-1865", "12140", "83412", "238912", "375008", "-1397504", "-9548288", "-17188864", "-7581696", "2260992", "-7471104", "-786432"],
};

pub const F3R2_P18: GoldenPoly = GoldenPoly {
    name: "f3r2_p18",
    expr: "4 +13 x +87 x^2 +1472 x^3 -1950 x^4 -34896 x^5 +53220 x^6 +630696 x^7 +536416 x^8 -4436416 x^9 -21416192 x^10 -32954368 x^11 +80510976 x^12 +304701440 x^13 +227115008 x^14 +5636096 x^15 +151519232 x^16 +29360128 x^17 -16777216 x^18",
    coeffs: &["4", "13", "87", "1472", "-1950", "-34896", "53220", "630696", "536416", "-4436416", "-21416192", "-32954368", "80510976", "304701440", "227115008", "5636096", "151519232", "29360128", "-16777216"],
};

pub const F3R2_P20: GoldenPoly = GoldenPoly {
    name: "f3r2_p20",
    expr: "2 -5 x -233 x^2 +43 x^3 +7343 x^4 +14408 x^5 +28660 x^6 +68224 x^7 -2196448 x^8 -13292608 x^9 -21440000 x^10 +94341632 x^11 +562065408 x^12 +700620800 x^13 -1591803904 x^14 -4451794944 x^15 -2017984512 x^16 +467664896 x^17 -2013265920 x^18 -268435456 x^19 +67108864 x^20",
    coeffs: &["2", "-5", "-233", "43", "7343", "14408", "28660", "68224", "-2196448", "-13292608", "-21440000", "94341632", "562065408", "700620800", "-1591803904", "-4451794944", "-2017984512", "467664896", "-2013265920", "-268435456", "67108864"],
};

pub const H41_C0_INNER: GoldenPoly = GoldenPoly {
    name: "h41_c0_inner",
    expr: "1 - 16x - 128x^2",
    coeffs: &["1", "-16", "-128"],
};

pub const H41_C1_INNER: GoldenPoly = GoldenPoly {
    name: "h41_c1_inner",
    expr: "589824x^5 - 266240x^4 + 40960x^3 - 3968x^2 + 144x - 1",
    coeffs: &["-1", "144", "-3968", "40960", "-266240", "589824"],
};

pub const H41_C2_INNER: GoldenPoly = GoldenPoly {
    name: "h41_c2_inner",
    expr: "233472x^4 - 83968x^3 + 10880x^2 - 512x + 7",
    coeffs: &["7", "-512", "10880", "-83968", "233472"],
};

pub const H41_C3_INNER: GoldenPoly = GoldenPoly {
    name: "h41_c3_inner",
    expr: "512x^2 - 96x + 3",
    coeffs: &["3", "-96", "512"],
};

pub const H42_C0_INNER: GoldenPoly = GoldenPoly {
    name: "h42_c0_inner",
    expr: "192x^2 - 16x + 1",
    coeffs: &["1", "-16", "192"],
};

pub const H42_C1_INNER: GoldenPoly = GoldenPoly {
    name: "h42_c1_inner",
    expr: "466944x^4 - 90112x^3 + 5952x^2 - 144x + 1",
    coeffs: &["1", "-144", "5952", "-90112", "466944"],
};

pub const H42_C2_INNER: GoldenPoly = GoldenPoly {
    name: "h42_c2_inner",
    expr: "50688x^3 - 8768x^2 + 456x - 7",
    coeffs: &["-7", "456", "-8768", "50688"],
};

pub const H42_C3_INNER: GoldenPoly = GoldenPoly {
    name: "h42_c3_inner",
    expr: "640x^2 - 96x + 3",
    coeffs: &["3", "-96", "640"],
};

pub const LT3R2_P3: GoldenPoly = GoldenPoly {
    name: "lt3r2_p3",
    expr: "3 -92 x +1792 x^2 +4096 x^3",
    coeffs: &["3", "-92", "1792", "4096"],
};

pub const LT3R2_P4: GoldenPoly = GoldenPoly {
    name: "lt3r2_p4",
    expr: "3 -68 x +976 x^2 -2624 x^3 -61440 x^4",
    coeffs: &["3", "-68", "976", "-2624", "-61440"],
};

pub const LT3R2_P6: GoldenPoly = GoldenPoly {
    name: "lt3r2_p6",
    expr: "3 -152 x +3528 x^2 -42384 x^3 +89024 x^4 +1966080 x^5 -5898240 x^6",
    coeffs: &["3", "-152", "3528", "-42384", "89024", "1966080", "-5898240"],
};

pub const LT3R2_Q3: GoldenPoly = GoldenPoly {
    name: "lt3r2_q3",
    expr: "5 -160 x +1232 x^2 -1024 x^3",
    coeffs: &["5", "-160", "1232", "-1024"],
};

pub const P10: GoldenPoly = GoldenPoly {
    name: "p10",
    expr: "19394461696 x^10 -17411604480 x^9 +6106742784 x^8 -1095237312 x^7 +158668656 x^6 -36766920 x^5 +7627535 x^4 -900594 x^3 +57342 x^2 -1856 x +24",
    coeffs: &["24", "-1856", "57342", "-900594", "7627535", "-36766920", "158668656", "-1095237312", "6106742784", "-17411604480", "19394461696"],
};

pub const P17: GoldenPoly = GoldenPoly {
    name: "p17",
    expr: "140082179425173504 x^17 -496507256028790784 x^16 +705909942330064896 x^15 -440315308230574080 x^14 +141123001405931520 x^13 -25595376023494656 x^12 +4059589860750336 x^11 -1133589089074624 x^10 +350453101085400 x^9 -74115473257440 x^8 +10126459925120 x^7 -904049598675 x^6 +52738591890 x^5 -1959091320 x^4 +43407720 x^3 -502593 x^2 +2548 x -12",
    coeffs: &["-12", "2548", "-502593", "43407720", "-1959091320", "52738591890", "-904049598675", "10126459925120", "-74115473257440", "350453101085400", "-1133589089074624", "4059589860750336", "-25595376023494656", "141123001405931520", "-440315308230574080", "705909942330064896", "-496507256028790784", "140082179425173504"],
};

pub const P34: GoldenPoly = GoldenPoly {
    name: "p34",
    expr: "17592186044416 x^34 -8796093022208 x^33 +204509162766336 x^32 -240793046482944 x^31 +347033357516800 x^30 -356447925829632 x^29 +307648507412480 x^28 +1547605565767680 x^27 -1478894410530816 x^26 -3440457380003840 x^25 +451333349965824 x^24 +3747745613479936 x^23 +2236072096432128 x^22 -31693519978496 x^21 -472806540705792 x^20 -202845119840256 x^19 -55945141010432 x^18 -6522043670528 x^17 +8027346038784 x^16 +5016548481024 x^15 +1158549638912 x^14 -15663757696 x^13 -149163564992 x^12 -59735088608 x^11 -2074333552 x^10 +4173311968 x^9 +738617492 x^8 -85245032 x^7 -26786428 x^6 +581796 x^5 +383308 x^4 -20652 x^3 -4867 x^2 +338 x +49",
    coeffs: &["49", "338", "-4867", "-20652", "383308", "581796", "-26786428", "-85245032", "738617492", "4173311968", "-2074333552", "-59735088608", "-149163564992", "-15663757696", "1158549638912", "5016548481024", "8027346038784", "-6522043670528", "-55945141010432", "-202845119840256", "-472806540705792", "-31693519978496", "2236072096432128", "3747745613479936", "451333349965824", "-3440457380003840", "-1478894410530816", "1547605565767680", "307648507412480", "-356447925829632", "347033357516800", "-240793046482944", "204509162766336", "-8796093022208", "17592186044416"],
};

pub const P53: GoldenPoly = GoldenPoly {
    name: "p53",
    expr: "5902958103587056517120 x^53 +4722366482869645213696 x^52 +135675802662133752135680 x^51 +36533776637981766975488 x^50 -60743975313220946624512 x^49 +3954166813899570825658368 x^48 +96486199280696075223040 x^47 -869025933168471881809920 x^46 +17891408360681834540957696 x^45 +19134090460943456531382272 x^44 -6556910656212804697063424 x^43 -18888872271338563015016448 x^42 -9641687070213801940877312 x^41 -856236460709396327956480 x^40 +1442025047697796450222080 x^39 +3004016932710650818330624 x^38 +2353865809090149001199616 x^37 -846024305296182175858688 x^36 -1509872584625178282033152 x^35 +296963035049372304801792 x^34 +832265748859080390213632 x^33 +79111183944514552201216 x^32 -245083727451855922397184 x^31 -73512832264242582257664 x^30 +31367300451777147568128 x^29 +12977767646670109016064 x^28 -3680779152078761099264 x^27 -1138134172734191566848 x^26 +939259567872233308160 x^25 +292487910921964093440 x^24 -129084866249262874624 x^23 -72153802925319249920 x^22 +464226011870542848 x^21 +8000870954669244416 x^20 +1689242686839294720 x^19 -289875180323084800 x^18 -171427111790469312 x^17 -17240190260449408 x^16 +4666400462438480 x^15 +1816703798900448 x^14 +258529109814976 x^13 -29106463737504 x^12 -20951763420448 x^11 -2341127444328 x^10 +460438019724 x^9 +115534150804 x^8 -15491040 x^7 -1792901976 x^6 -94207344 x^5 +6320658 x^4 -571740 x^3 -192705 x^2 -10869 x -147",
    coeffs: &["-147", "-10869", "-192705", "-571740", "6320658", "-94207344", "-1792901976", "-15491040", "115534150804", "460438019724", "-2341127444328", "-20951763420448", "-29106463737504", "258529109814976", "1816703798900448", "4666400462438480", "-17240190260449408", "-171427111790469312", "-289875180323084800", "1689242686839294720", "8000870954669244416", "464226011870542848", "-72153802925319249920", "-129084866249262874624", "292487910921964093440", "939259567872233308160", "-1138134172734191566848", "-3680779152078761099264", "12977767646670109016064", "31367300451777147568128", "-73512832264242582257664", "-245083727451855922397184", "79111183944514552201216", "832265748859080390213632", "296963035049372304801792", "-1509872584625178282033152", "-846024305296182175858688", "2353865809090149001199616", "3004016932710650818330624", "1442025047697796450222080", "-856236460709396327956480", "-9641687070213801940877312", "-18888872271338563015016448", "-6556910656212804697063424", "19134090460943456531382272", "17891408360681834540957696", "-869025933168471881809920", "96486199280696075223040", "3954166813899570825658368", "-60743975313220946624512", "36533776637981766975488", "135675802662133752135680", "4722366482869645213696", "5902958103587056517120"],
};

pub const R3_Q0: GoldenPoly = GoldenPoly {
    name: "r3_q0",
    expr: "20-2590 x+145574 x^2-4725757 x^3+99952043 x^4 -1473719054 x^5 +15848325886 x^6-128583477160 x^7 +795236207808 x^8-3570673925376 x^9 +9940600639488 x^10 -10105313820672 x^11 -13061917245440 x^12 +14868774125568 x^13+15771119910912 x^14",
    coeffs: &["20", "-2590", "145574", "-4725757", "99952043", "-1473719054", "15848325886", "-128583477160", "795236207808", "-3570673925376", "9940600639488", "-10105313820672", "-13061917245440", "14868774125568", "15771119910912"],
};

pub const R3_Q1: GoldenPoly = GoldenPoly {
    name: "r3_q1",
    expr: "20 -3710 x +303254 x^2-14374525 x^3 +439222171 x^4 -9126353218 x^5 +133114097446 x^6 -1396508587356 x^7 +10831258373280 x^8 -63997739175680 x^9 +285429913462784 x^10-832850214682624 x^11 +969294168981504 x^12 +842807128358912 x^13-1089827550265344 x^14 -1135520633585664 x^15",
    coeffs: &["20", "-3710", "303254", "-14374525", "439222171", "-9126353218", "133114097446", "-1396508587356", "10831258373280", "-63997739175680", "285429913462784", "-832850214682624", "969294168981504", "842807128358912", "-1089827550265344", "-1135520633585664"],
};

pub const R3_Q2: GoldenPoly = GoldenPoly {
    name: "r3_q2",
    expr: "60-8730 x+551602 x^2-19952295 x^3 +459567769 x^4 -7113445902 x^5 +76621809730 x^6 -596173812436 x^7 +3524748623424 x^8 -16119878544384 x^9 +49591145041920 x^10 -62942370168832 x^11 -43186282037248 x^12 +62103616487424 x^13 +63084479643648 x^14",
    coeffs: &["60", "-8730", "551602", "-19952295", "459567769", "-7113445902", "76621809730", "-596173812436", "3524748623424", "-16119878544384", "49591145041920", "-62942370168832", "-43186282037248", "62103616487424", "63084479643648"],
};

pub const R3_Q3: GoldenPoly = GoldenPoly {
    name: "r3_q3",
    expr: "20-2270 x+106086 x^2-2675757 x^3 +40471555 x^4 -389549218 x^5 +2566958582 x^6-13288554644 x^7 +53910201600 x^8-95886464512 x^9 -40752267264 x^10 +93413441536 x^11 +82141249536 x^12",
    coeffs: &["20", "-2270", "106086", "-2675757", "40471555", "-389549218", "2566958582", "-13288554644", "53910201600", "-95886464512", "-40752267264", "93413441536", "82141249536"],
};

pub const SYM2_LT3_NUM: GoldenPoly = GoldenPoly {
    name: "sym2_lt3_num",
    expr: "2 - 42x + 225x^2 - 260x^3 - 4352x^4 + 49152x^5",
    coeffs: &["2", "-42", "225", "-260", "-4352", "49152"],
};

pub const ALL: &[&GoldenPoly] = &[&A26, &A37, &A4, &A7, &F3R2_P15, &F3R2_P18, &F3R2_P20, &H41_C0_INNER, &H41_C1_INNER, &H41_C2_INNER, &H41_C3_INNER, &H42_C0_INNER, &H42_C1_INNER, &H42_C2_INNER, &H42_C3_INNER, &LT3R2_P3, &LT3R2_P4, &LT3R2_P6, &LT3R2_Q3, &P10, &P17, &P34, &P53, &R3_Q0, &R3_Q1, &R3_Q2, &R3_Q3, &SYM2_LT3_NUM];
