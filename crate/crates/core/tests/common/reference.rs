#![allow(clippy::excessive_precision)]

//! Reference values computed with 50-digit arithmetic from the closed
//! forms `cos √z`, `sin √z / √z` and the characteristic function.

pub const KERNEL_REF: &[[f64; 10]] = &[
    [0.00000000000000000e+00, 0.00000000000000000e+00, 1.00000000000000000e+00, 0.00000000000000000e+00, 1.00000000000000000e+00, 0.00000000000000000e+00, -5.00000000000000000e-01, 0.00000000000000000e+00, -1.66666666666666657e-01, 0.00000000000000000e+00],
    [3.00000000000000006e-03, -2.00000000000000004e-03, 9.98500208345830420e-01, 9.99500063885912790e-04, 9.99500041668452077e-01, 3.33233342459986800e-04, -4.99750020834226039e-01, -1.66616671229993400e-04, -1.66616669642956322e-01, -3.33261909832301180e-05],
    [-8.00000000000000017e-03, 4.00000000000000008e-03, 1.00400200017773322e+00, -2.00266764459683692e-03, 1.00133373335872511e+00, -6.67200139699471997e-04, -5.00666866679362554e-01, 3.33600069849735999e-04, -1.66800028572839293e-01, 6.67047696656726432e-05],
    [5.00000000000000000e-01, 0.00000000000000000e+00, 7.60244597075630191e-01, 0.00000000000000000e+00, 9.18725369865568409e-01, 0.00000000000000000e+00, -4.59362684932784204e-01, 0.00000000000000000e+00, -1.58480772789938273e-01, 0.00000000000000000e+00],
    [-2.00000000000000000e+00, 0.00000000000000000e+00, 2.17818355660857099e+00, 0.00000000000000000e+00, 1.36829887200859068e+00, 0.00000000000000000e+00, -6.84149436004295342e-01, 0.00000000000000000e+00, -2.02471171149995049e-01, 0.00000000000000000e+00],
    [-5.00000000000000000e+01, 0.00000000000000000e+00, 5.88702729587587214e+02, 0.00000000000000000e+00, 8.32550183260896119e+01, 0.00000000000000000e+00, -4.16275091630448060e+01, 0.00000000000000000e+00, -5.05447711261497634e+00, 0.00000000000000000e+00],
    [3.00000000000000000e+01, 0.00000000000000000e+00, 6.92419111593747805e-01, 0.00000000000000000e+00, -1.31726455695091227e-01, 0.00000000000000000e+00, 6.58632278475456134e-02, 0.00000000000000000e+00, 1.37357594548139852e-02, 0.00000000000000000e+00],
    [1.00000000000000000e+00, 1.00000000000000000e+00, 5.02679673630336610e-01, -4.19443358761317608e-01, 8.33719236004829778e-01, -1.50396726466997754e-01, -4.16859618002414889e-01, 7.51983632334988772e-02, -1.50021548667203242e-01, 1.54982325200433303e-02],
    [-3.00000000000000000e+00, 4.00000000000000000e+00, 2.03272300701966557e+00, -3.05189779915180015e+00, 1.41699611921187607e+00, -8.74391197002146070e-01, -7.08498059605938035e-01, 4.37195598501073035e-01, -2.11144141440439692e-01, 8.13922451043560813e-02],
    [1.20000000000000000e+01, -7.00000000000000000e+00, -1.35682995420281749e+00, -4.99680065907226911e-01, -2.43819420635269929e-01, 2.16871330131156920e-01, 1.21909710317634964e-01, -1.08435665065578460e-01, -2.16069083692794900e-02, -4.24603380503456931e-02],
    [0.00000000000000000e+00, 9.00000000000000000e+01, 3.73112486679770996e+02, -1.68872294880479615e+02, 4.03971150982999418e+01, 1.52230446639026660e+01, -2.01985575491499709e+01, -7.61152233195133299e+00, -1.02275188635767922e+00, -1.84841873100817256e+00],
    [-9.90000000000000000e+01, 5.00000000000000000e+00, 1.01783091897337199e+04, -2.61174016965179453e+03, 1.02859986209656631e+03, -2.36447963058335432e+02, -5.14299931048283156e+02, 1.18223981529167716e+02, -4.66974193196135516e+01, 9.63796976463294719e+00],
    [4.00000000000000000e+01, -6.00000000000000000e+01, 9.86571820197542237e+00, 2.56503703808860308e+01, 3.21278403440521787e+00, 4.02592367104235627e-01, -1.60639201720260894e+00, -2.01296183552117813e-01, -1.20072049435009556e-01, 1.35489151019758086e-01],
    [2.00000000000000004e-02, 1.00000000000000002e-02, 9.90012497220487120e-01, -4.98334860515986001e-03, 9.96669166269648410e-01, -1.66333551521174300e-03, -4.98334583134824205e-01, 8.31667757605871502e-04, -1.66333511882707286e-01, 1.66428692650717448e-04],
    [-5.00000000000000000e-01, -6.99999999999999956e-01, 1.23914205951872169e+00, 3.79410980942235687e-01, 1.08121111053949348e+00, 1.22535173358098673e-01, -5.40605555269746740e-01, -6.12675866790493365e-02, -1.74850364728723034e-01, -1.20852969639247843e-02],
    [-6.11859669338150880e+00, -8.51675024645782131e+00, 8.30351849834687683e-01, 8.85355277995177481e+00, 1.48229266610228572e+00, 2.33173096822599435e+00, -7.41146333051142858e-01, -1.16586548411299717e+00, -2.34403496296635372e-01, -2.06674002941853702e-01],
    [-3.80582542940459660e+01, -1.86257650658209108e+01, 2.89683851953757845e+01, 2.82347017292465466e+02, 1.41214400014124450e+01, 4.12535994114027815e+01, -7.06072000070622252e+00, -2.06267997057013908e+01, -1.40797020491292857e+00, -2.47836345712009321e+00],
    [1.90839401504741168e+01, -2.14584849206608084e+01, 7.97522849855583527e-01, -4.36394539829760397e+00, -7.02137843490242886e-01, -4.74332704770566160e-01, 3.51068921745121443e-01, 2.37166352385283080e-01, 6.79578101111508875e-02, -2.54944576128410157e-02],
    [3.36020467139230727e-01, 1.57103253493744467e-02, 8.36632017618934243e-01, -7.42257369267181402e-03, 9.44928002800372036e-01, -2.53145293938079234e-03, -4.72464001400186018e-01, 1.26572646969039617e-03, -1.61132972926228385e-01, 2.55612562141615705e-04],
    [1.28549584689457486e-01, -5.69318761108582247e-02, 9.36277482301128283e-01, 2.78597113759773661e-02, 9.78685593619118221e-01, 9.36719218390878218e-03, -4.89342796809559111e-01, -4.68359609195439109e-03, -1.64532070944773956e-01, -9.40181048025016584e-04],
    [-4.10837374993199833e-01, -2.63315779215855417e-01, 1.20953922578993334e+00, 1.40833783955731595e-01, 1.06929836444191606e+00, 4.57119139387483012e-02, -5.34649182220958030e-01, -2.28559569693741506e-02, -1.73572971702384116e-01, -4.51865586449498070e-03],
    [-8.36793788478427381e+00, 1.59611288911949263e+01, -1.10864198555408482e+01, -1.53054164100376742e+01, -3.62977438409935571e-01, -4.43894640043287936e+00, 1.81488719204967786e-01, 2.21947320021643968e+00, -1.28868808458935252e-01, 4.03485708118597408e-01],
    [-2.56499014835380901e-01, -1.51107734220190792e+00, 1.03354294443289363e+00, 7.83376250379056338e-01, 1.02393692692589466e+00, 2.57671311365320566e-01, -5.11968463462947332e-01, -1.28835655682660283e-01, -1.69603037373379839e-01, -2.56108685935744172e-02],
    [-3.72614524815245360e+01, 1.27029180373302317e+01, 1.26371905788951111e+02, -2.08594185199731896e+02, 2.53068118651323815e+01, -2.95044601234062469e+01, -1.26534059325661907e+01, 1.47522300617031235e+01, -1.94891998208501160e+00, 1.73873768813885632e+00],
    [2.65300126481803851e+01, -2.01337251482820179e+01, 2.21829240215514778e+00, -2.23127756863457627e+00, -2.68829408795753455e-01, -4.76082946401450324e-01, 1.34414704397876728e-01, 2.38041473200725162e-01, 4.56731006438949594e-02, 1.58207025658237957e-03],
    [-9.12540928697615072e+01, -2.74989385963080721e+01, 1.14757227622869118e+03, 7.74015452802906384e+03, 2.31906551789282048e+02, 7.67225165362054440e+02, -1.15953275894641024e+02, -3.83612582681027220e+02, -1.51542009367453367e+01, -3.36394800908161500e+01],
    [1.81524396457163384e+01, -7.14262463528768166e+01, 8.56016640238364772e+01, 4.60514950220986279e+01, 1.03557812622713747e+01, -4.57782468542658449e+00, -5.17789063113568737e+00, 2.28891234271329225e+00, -2.07169478243867305e-01, 5.79388879356560249e-01],
    [-1.53656044575051065e+00, -1.40333424370798854e+00, 1.77656347179847862e+00, 8.91404364627923385e-01, 1.25822427834418615e+00, 2.71260141098440710e-01, -6.29112139172093077e-01, -1.35630070549220355e-01, -1.92446725149354375e-01, -2.60354432419696545e-02],
    [-3.84099838365719304e+00, 8.70648946271822943e+00, -7.56188520904070183e-01, -6.54665676401195018e+00, 9.69099929872993204e-01, -1.93057600374795491e+00, -4.84549964936496602e-01, 9.65288001873977453e-01, -1.85315959655961204e-01, 1.80835517418912461e-01],
    [2.84623109916829220e+00, 1.60220064581747867e+00, -1.95333882594831004e-01, -4.67001831987495841e-01, 5.71381630464425916e-01, -1.97666272538975091e-01, -2.85690815232212958e-01, 9.88331362694875454e-02, -1.22504684153719567e-01, 2.16459248022757046e-02],
];
/// k, gamma, ell, F, dF/dk.
pub const F_REF: &[[f64; 8]] = &[
    [1.00000000000000000e+00, 5.00000000000000000e-01, 3.00000000000000000e+00, 1.00000000000000000e+00, 2.54850757616133023e+01, -4.99933839450801472e+01, -2.50956117395795388e+02, -5.79819380703068461e+01],
    [1.06468255059999994e+00, 0.00000000000000000e+00, 2.07173712489999984e+00, 0.00000000000000000e+00, 3.01139947364726636e-10, -2.18198067102462832e-11, 9.13532510924516039e+00, -2.54957045057029497e+00],
    [2.00000000000000000e+00, -1.00000000000000000e+00, 1.60000000000000000e+01, 5.00000000000000000e-01, -5.45716288495854656e+02, 1.08037782598471995e+03, -6.33169905518916153e+02, -1.57988560337865056e+03],
    [-6.99999999999999956e-01, 2.00000000000000000e+00, 5.00000000000000000e+00, 2.00000000000000000e+00, -7.67904879057738662e+08, -2.30190827229173742e+07, -4.04704571978793681e+08, 6.94026413396584320e+09],
    [4.00000000000000000e+00, 2.00000000000000011e-01, 4.00000000000000000e+01, 3.00000000000000000e+00, 8.43013849267680780e+04, -1.24234198419123946e+05, -1.72578591484067054e+06, -9.08228523465679493e+05],
    [2.99999999999999989e-01, -1.00000000000000006e-01, 5.00000000000000000e-01, 4.00000000000000000e+00, -2.30624027583702318e-01, 8.42749739272365406e-02, -3.96553379105911485e+00, -1.41572301722170102e+00],
    [6.00000000000000000e+00, -2.00000000000000000e+00, 2.70000000000000000e+01, 1.50000000000000000e+00, -3.73439045101639522e+03, 3.36273517708320378e+03, -9.05319451012234640e+03, -4.64880997085323361e+03],
    [5.00000000000000028e-02, 1.00000000000000002e-02, 1.00000000000000000e+00, 2.00000000000000011e-01, -3.12185872159240728e-02, 1.02146295283664104e-01, -4.04394566195895588e-01, 2.00019931692064068e+00],
    [3.00000000000000000e+00, 3.00000000000000000e+00, 1.00000000000000000e+01, 6.99999999999999956e-01, -2.34186704530327907e+06, -2.03430697711150569e+04, 1.12900836076296261e+06, 1.07456018089203425e+07],
    [8.00000000000000000e+00, -5.00000000000000000e-01, 4.40000000000000000e+01, 2.50000000000000000e+00, -8.54489911839311731e+02, 8.12888956822470277e+02, 2.78640772909602985e+00, 3.41747650172033900e+02],
    [1.66696162711420826e+00, -7.65614743645612883e-01, 1.66584617384319564e+01, 3.13944874866615709e-01, 3.69527381870105476e+00, 1.83899084404918267e+03, -9.99829573769002764e+02, -1.18272042020883669e+03],
    [-5.28478596040520809e+00, -1.76424772308404076e+00, 2.05717992088626858e+01, 2.13796152834701436e+00, 1.67816031202686395e+03, -1.88023337554593377e+03, 2.81018294209008718e+03, 4.83095196853593916e+03],
    [-2.23023395547850178e+00, 5.13371181045832348e-01, 1.38689391029378726e+01, 1.49883498431841167e+00, -2.00532301589365920e+03, -5.74059571466105717e+03, -3.55571934678524631e+04, 7.99972952756819268e+03],
    [3.53255377826989303e+00, 1.19396660237742758e+00, 7.70084706630350979e+00, 2.87211855129335492e+00, 1.52061068837364088e+06, 2.67693055431143288e+06, 4.31669964783529118e+07, -8.91586915205905959e+06],
    [3.02358045737417314e-01, 2.25082497344057320e+00, 2.20186360384569184e+01, 1.43968882445093271e+00, 1.42231138971271467e+09, 3.54748695539835358e+09, 2.27694557789643250e+10, -9.52102186340630531e+09],
    [5.76209816991098478e+00, -2.29160533047022730e+00, 1.28346232426642022e+01, 3.78570464782624683e+00, 2.10086789732465377e+03, 1.26968321863316705e+04, -2.60913436446110099e+04, 9.29727967195947531e+03],
    [-4.17618558407394325e+00, -6.62213971451661720e-02, 1.65661408289941092e+00, 3.34107928267197618e+00, 3.63218681440528215e+01, 7.07282934131580703e+01, -1.58551735746574650e+02, 3.94671781018344277e+01],
    [3.17485039455375784e+00, 4.38155641664303985e-01, 2.63265954490112044e+01, 1.56873756424048372e+00, -6.08909225374700054e+03, 4.16560893250435111e+04, 2.55047251344985649e+05, 1.08864701024708502e+04],
    [2.34354439528391190e+00, 5.66219262630110798e-01, 1.76069085263335197e+01, 2.28102665650706538e+00, 1.20518013969345993e+05, 2.41460067304402728e+04, 1.28841943460136870e+05, -1.13075485052073817e+06],
    [4.07961336615049674e+00, 2.66808657064762400e+00, 1.44859009538795114e+01, 3.32076102737337209e+00, 6.11560179286308096e+17, -3.35837018890094336e+17, -5.26093760353485414e+18, -9.53655671485301760e+18],
];
