// SPDX-License-Identifier: Apache-2.0
//
// chx - multipath parameter estimation and channel extrapolation toolkit
// Copyright (C) 2026 chx developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef chx_common_binary_io_H
#define chx_common_binary_io_H

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "common/error.hpp"

namespace chx
{

// All output files are written to a sibling temp file and renamed into
// place, so readers never observe a partially written file.
inline void write_file_atomic(const std::string &path, const void *data, std::size_t n)
{
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            raise(errc::io_failure, "cannot open for writing: " + tmp);
        out.write(static_cast<const char *>(data), std::streamsize(n));
        out.flush();
        if (!out)
            raise(errc::io_failure, "short write: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        raise(errc::io_failure, "cannot move into place: " + path);
}

inline void write_text_file(const std::string &path, const std::string &text)
{
    write_file_atomic(path, text.data(), text.size());
}

// Little-endian stream writer/reader over a growable byte buffer. All chx
// container files are written through these, so the on-disk layout is
// endian-fixed regardless of host.

class le_writer
{
  public:
    void put_bytes(const void *p, std::size_t n)
    {
        const auto *b = static_cast<const unsigned char *>(p);
        buf_.insert(buf_.end(), b, b + n);
    }

    void put_u8(std::uint8_t v) { buf_.push_back(v); }

    void put_u32(std::uint32_t v)
    {
        unsigned char b[4];
        for (int i = 0; i < 4; ++i)
            b[i] = (unsigned char)((v >> (8 * i)) & 0xFF);
        put_bytes(b, 4);
    }

    void put_f64(double v)
    {
        std::uint64_t u = std::bit_cast<std::uint64_t>(v);
        unsigned char b[8];
        for (int i = 0; i < 8; ++i)
            b[i] = (unsigned char)((u >> (8 * i)) & 0xFF);
        put_bytes(b, 8);
    }

    void write_file(const std::string &path) const
    {
        write_file_atomic(path, buf_.data(), buf_.size());
    }

    const std::vector<unsigned char> &bytes() const { return buf_; }

  private:
    std::vector<unsigned char> buf_;
};

class le_reader
{
  public:
    explicit le_reader(std::vector<unsigned char> bytes) : buf_(std::move(bytes)) {}

    static le_reader from_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary | std::ios::ate);
        if (!in)
            raise(errc::io_failure, "cannot open for reading: " + path);
        std::streamsize size = in.tellg();
        in.seekg(0);
        std::vector<unsigned char> bytes(static_cast<std::size_t>(size));
        in.read(reinterpret_cast<char *>(bytes.data()), size);
        if (!in)
            raise(errc::io_failure, "short read: " + path);
        return le_reader(std::move(bytes));
    }

    void get_bytes(void *p, std::size_t n)
    {
        if (pos_ + n > buf_.size())
            raise(errc::io_failure, "truncated container file");
        std::memcpy(p, buf_.data() + pos_, n);
        pos_ += n;
    }

    std::uint8_t get_u8()
    {
        std::uint8_t v = 0;
        get_bytes(&v, 1);
        return v;
    }

    std::uint32_t get_u32()
    {
        unsigned char b[4];
        get_bytes(b, 4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= std::uint32_t(b[i]) << (8 * i);
        return v;
    }

    double get_f64()
    {
        unsigned char b[8];
        get_bytes(b, 8);
        std::uint64_t u = 0;
        for (int i = 0; i < 8; ++i)
            u |= std::uint64_t(b[i]) << (8 * i);
        return std::bit_cast<double>(u);
    }

    std::size_t remaining() const { return buf_.size() - pos_; }

  private:
    std::vector<unsigned char> buf_;
    std::size_t pos_ = 0;
};

} // namespace chx

#endif
