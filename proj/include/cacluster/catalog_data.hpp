#pragma once

// Generated from data/rule_catalog.tsv; regenerate both together.

#include <string_view>

namespace cacluster::catalog_data {

inline constexpr std::string_view kText = R"cat(# cacluster rule catalog, format 1
# record: n<TAB>criterion<TAB>rule-decimal
# parameter line: # n=<n> l1=<fraction> l2=<cycle cap> [c3_cap=<signature cap> c3_fraction=<fraction>]
# c3_cap/c3_fraction, when present, define the small-n Criterion 3 selection.
# n=6 l1=0.6 l2=2 c3_cap=9 c3_fraction=1
# n=7 l1=0.5 l2=4 c3_cap=9 c3_fraction=0.5
# n=8 l1=0.4 l2=6
# n=9 l1=0.4 l2=10
# n=10 l1=0.4 l2=15
# n=11 l1=0.4 l2=20
# n=12 l1=0.4 l2=30
# n=13 l1=0.4 l2=40
6	2	252645336
6	2	252645360
6	2	252656880
6	2	252691440
6	2	252695055
6	2	252702735
6	3	252702735
6	2	255652080
6	2	260960271
6	3	260960271
6	2	264499440
6	2	267390735
6	2	267422991
6	2	570174960
6	2	756011535
6	2	756019215
6	3	756019215
6	2	1263225675
6	3	1263225675
6	2	1511938590
6	2	1831415085
6	2	1921479288
6	2	2018211960
6	2	2018212080
6	2	3538955760
6	2	3789677025
6	3	3789677025
6	2	4027518735
6	2	4027544304
6	2	4027576560
6	2	4030467855
6	2	4031508720
6	2	4034007024
6	2	4035440880
6	2	4039315215
6	2	4042264560
6	2	4042272240
6	2	4042310415
6	2	4042321935
6	3	4042321935
7	2	252695055
7	3	252695055
7	2	252702735
7	3	252702735
7	3	260960271
7	3	756011535
7	3	756019215
7	3	764269197
7	3	764276877
7	3	1259293515
7	2	1263225675
7	3	1263225675
7	3	1267157835
7	3	1799965515
7	3	2072267595
7	3	2076199755
7	3	2218767375
7	3	2276755275
7	3	2373488007
7	2	3035673735
7	3	3035673735
7	3	3278049123
7	3	3373255107
7	3	3726716205
7	3	3777830445
7	2	3785744805
7	3	3785744805
7	2	3789677025
7	3	3789677025
7	2	4027518735
7	2	4027544304
7	2	4027576560
7	2	4030467855
7	2	4031508720
7	2	4034007024
7	2	4035440880
7	2	4039315215
7	2	4039373040
7	2	4041289185
7	3	4041289185
7	2	4042264560
7	2	4042272240
7	2	4042275855
7	2	4042310415
7	3	4042310415
7	2	4042321935
7	3	4042321935
8	2	252702735
8	3	252702735
8	3	260960271
8	3	756011535
8	3	756019215
8	2	757935405
8	3	764269197
8	3	1259293515
8	2	1263225615
8	3	1267157880
8	2	1921479288
8	2	2018211960
8	2	2018212080
8	3	2218767375
8	2	2273806215
8	3	2275772325
8	3	2276755335
8	3	2373488007
8	2	2495001780
8	2	3027809460
8	2	3063191190
8	2	3538955760
8	2	3777826605
8	2	3789630945
8	2	3789677025
8	3	3789677025
8	2	4027518735
8	2	4027544304
8	2	4027576560
8	3	4029484845
8	2	4030467855
8	3	4030467855
8	2	4031508720
8	2	4034007024
8	2	4035440880
8	2	4039315215
8	2	4041289185
8	2	4042264560
8	2	4042272240
8	2	4042310415
8	2	4042321935
8	3	4042321935
9	2	252645195
9	2	252645360
9	2	252648975
9	2	252656655
9	2	252656880
9	2	252691440
9	2	252695055
9	3	252695055
9	2	252698895
9	2	252702735
9	3	252702735
9	2	254618925
9	2	255652080
9	2	256577355
9	2	259526415
9	2	260960271
9	3	260960271
9	2	263458575
9	3	263458635
9	2	264499440
9	2	265482450
9	2	267390735
9	2	267422991
9	2	505290270
9	2	517140690
9	2	521018910
9	2	570174960
9	2	756019215
9	3	756019215
9	2	757935405
9	3	764273037
9	3	1259293560
9	2	1263225615
9	2	1263225675
9	3	1263225675
9	2	1921479288
9	2	2018211960
9	2	2018212080
9	2	2273806215
9	2	2495001780
9	2	3027809460
9	2	3538955760
9	3	3726716205
9	2	3789630945
9	2	3789677025
9	2	4027518735
9	2	4027544304
9	2	4027576560
9	2	4030467855
9	3	4030467855
9	2	4031508720
9	2	4034007024
9	2	4035440880
9	2	4039315215
9	2	4041289185
9	2	4042264560
9	2	4042268400
9	2	4042272240
9	2	4042310415
9	3	4042310415
9	2	4042321935
10	2	252645195
10	2	252645360
10	2	252648975
10	2	252656655
10	2	252656880
10	2	252691215
10	2	252691440
10	3	252695055
10	2	252698895
10	2	252702735
10	3	252702735
10	2	254611245
10	2	254618925
10	2	255594255
10	2	255652080
10	2	256577355
10	2	259526415
10	2	263458575
10	3	263458635
10	2	264499440
10	2	265482450
10	2	267390735
10	2	505290270
10	2	517140690
10	2	521018910
10	3	756019215
10	2	757935405
10	2	1259293455
10	2	1263225615
10	2	1263225675
10	3	1263225675
10	2	1921479288
10	2	2018211960
10	2	2018212080
10	2	2273806215
10	2	2783028705
10	3	3537972705
10	2	3538955760
10	2	4027518735
10	2	4027544304
10	2	4027576560
10	2	4030467855
10	3	4030467855
10	2	4031508720
10	2	4034007024
10	2	4035440880
10	2	4041289185
10	2	4042264560
10	2	4042272240
10	2	4042310415
10	2	4042321935
11	2	252645195
11	2	252645360
11	2	252648975
11	2	252656655
11	2	252656880
11	2	252691215
11	2	252691440
11	3	252695055
11	2	252698895
11	2	252702735
11	2	254611245
11	2	254618925
11	2	255594255
11	2	255652080
11	2	256577355
11	2	259526415
11	2	260509455
11	3	260960271
11	2	264499440
11	2	265482450
11	2	267390735
11	2	505290270
11	2	517140690
11	2	521018910
11	2	755961615
11	3	756011535
11	2	757935405
11	2	1259293455
11	2	1263225615
11	2	1263225675
11	2	1921479288
11	2	2018211960
11	2	2018212080
11	2	2273806215
11	2	2783028705
11	2	3031741620
11	2	3538955760
11	2	3789677025
11	2	4027518735
11	2	4027544304
11	2	4027576560
11	3	4030467855
11	2	4031508720
11	2	4034007024
11	2	4035440880
11	2	4039315215
11	2	4041289185
11	2	4042264560
11	2	4042272240
11	2	4042310415
11	3	4042310415
11	2	4042321935
12	2	252645195
12	2	252645360
12	2	252648975
12	2	252656655
12	2	252656880
12	2	252691215
12	2	252691440
12	3	252691440
12	3	252695055
12	2	252698895
12	2	252702735
12	2	254611245
12	2	254618925
12	2	255594255
12	2	255652080
12	2	256577355
12	2	259526415
12	2	260509455
12	2	264441615
12	2	264499440
12	2	265482450
12	2	267390735
12	2	505290270
12	2	517140690
12	2	521018910
12	2	755961615
12	2	755969295
12	2	757935405
12	2	1259293455
12	2	1263225615
12	2	1263225675
12	2	1921479288
12	2	2018211960
12	2	2018212080
12	2	2273806215
12	2	2783028705
12	2	3031741620
12	2	3538955760
12	2	3789630945
12	2	3789677025
12	3	3789677025
12	2	4027518735
12	2	4027544304
12	2	4027576560
12	3	4030467855
12	2	4031508720
12	2	4034007024
12	2	4035440880
12	2	4039315215
12	3	4039315215
12	2	4041289185
12	2	4042264560
12	2	4042272240
12	2	4042310415
12	3	4042310415
12	2	4042321935
12	3	4042321935
13	2	252645195
13	2	252645360
13	2	252648975
13	2	252656655
13	2	252691215
13	2	252691440
13	3	252691440
13	2	252698895
13	2	252702735
13	2	254611245
13	2	254618925
13	2	255594255
13	2	255652080
13	2	256577355
13	2	259526415
13	2	260509455
13	2	264441615
13	2	264499440
13	2	265482450
13	2	267390735
13	3	267422991
13	2	505290270
13	2	517140690
13	2	521018910
13	2	755961615
13	2	755969295
13	2	757935405
13	2	1259293455
13	2	1263225615
13	2	1263225675
13	2	1921479288
13	2	2018211960
13	2	2018212080
13	2	2273806215
13	2	2783028705
13	2	3031741620
13	2	3789677025
13	2	4027518735
13	2	4027544304
13	2	4027576560
13	2	4031508720
13	2	4034007024
13	2	4035440880
13	3	4039315215
13	2	4041289185
13	2	4042264560
13	2	4042272240
13	3	4042310415
13	2	4042321935
)cat";

inline constexpr std::string_view kSha256 = "7fde48ff3764bf6441bbcd4a84fcd3e32cbdeea1324d6d3d71f80e23cb4a6cdf";

} // namespace cacluster::catalog_data
