#include "qtl/quat.hpp"

#include <ostream>

namespace qtl {

Quat operator*(const Quat& a, const Quat& b) {
  return {
      a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
      a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
      a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
      a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
  };
}

ComplexPair split(const Quat& a) { return {cplx(a.w, a.x), cplx(a.y, -a.z)}; }

Quat merge(const ComplexPair& p) {
  return {p.c1.real(), p.c1.imag(), p.c2.real(), -p.c2.imag()};
}

std::ostream& operator<<(std::ostream& os, const Quat& a) {
  return os << a.w << (a.x < 0 ? "" : "+") << a.x << "i" << (a.y < 0 ? "" : "+") << a.y
            << "j" << (a.z < 0 ? "" : "+") << a.z << "k";
}

}  // namespace qtl
