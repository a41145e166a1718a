// Generates the right-ideal-class preset file for a quaternion preset.
// The CLI and the acceptance suite read the shipped file; this tool documents
// where that data comes from and can regenerate it.
#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include <ssg2/classset.hpp>
#include <ssg2/presets.hpp>

using namespace ssg2;

int main(int argc, char** argv) {
    std::string name = argc > 1 ? argv[1] : "p1601";
    std::string out = argc > 2 ? argv[2] : (name + "_classes.cfg");
    auto P = quat_preset_by_name(name);
    auto t0 = std::chrono::steady_clock::now();
    ClassSet cs = right_class_set(P.order.get());
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();
    std::cerr << name << ": " << cs.reps.size() << " right ideal classes ("
              << secs << " s)\n";
    // Eichler mass check: sum over classes of 1 / |O_L(I)^x| equals (p-1)/24
    Rat mass = 0;
    for (auto& I : cs.reps) {
        auto units = left_order_unit_reps(I);
        mass += Rat(1, (Int)units.size());
    }
    std::cerr << "mass = " << mass.str() << " (expect (p-1)/24 = "
              << Rat(P.p - 1, 24).str() << ")\n";
    std::ofstream f(out);
    f << "# right ideal class representatives for preset " << name << "\n";
    f << "# rows: basis of the ideal in order coordinates (16 rationals per class)\n";
    f << "preset " << name << "\n";
    f << "classes " << cs.reps.size() << "\n";
    for (size_t c = 0; c < cs.reps.size(); c++) {
        f << cs.labels[c];
        for (size_t i = 0; i < 4; i++)
            for (size_t j = 0; j < 4; j++) f << " " << cs.reps[c].rows.at(i, j).str();
        f << "\n";
    }
    std::cerr << "wrote " << out << "\n";
    return 0;
}
